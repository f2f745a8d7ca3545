// Copyright 2026 The fpif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fpif/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpif/error.hpp"
#include "fpif/random.hpp"

namespace fpif {

namespace {

void check_gamma(double gamma, const char* what) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError(std::string(what) + ": step size must be finite and > 0");
  }
}

void check_same_space(const Space& a, const Space& b, const char* what) {
  if (!(a == b)) {
    throw DimensionError(std::string(what) + ": operands live in different spaces");
  }
}

// Solves the implicit step
//   x = p + gamma q,  P q / delta + P^perp q = M (P p + P^perp p / delta) + c.
// With a = P p + P^perp p / delta and b = M a + c this is
//   (E + gamma F M) a = x - gamma F c,  E = P + delta P^perp, F = delta P + P^perp,
// and p = E a, q = F b.
class AffinePartialStep {
 public:
  AffinePartialStep(const AffineData& op, const Projector& projector,
                    double gamma, double delta)
      : op_(op), gamma_(gamma) {
    const Index n = op.matrix.rows();
    const Matrix& p = projector.matrix();
    const Matrix id = Matrix::Identity(n, n);
    e_ = p + delta * (id - p);
    f_ = delta * p + (id - p);
    lu_.compute(e_ + gamma * f_ * op.matrix);
    if (!lu_.isInvertible()) {
      throw UnsupportedError(
          "partial inverse step: singular implicit system (operator is not "
          "monotone in this metric?)");
    }
  }

  std::pair<Vector, Vector> solve(const Vector& x) const {
    const Vector a = lu_.solve(x - gamma_ * (f_ * op_.offset));
    const Vector b = op_.matrix * a + op_.offset;
    return {e_ * a, f_ * b};
  }

 private:
  AffineData op_;
  double gamma_;
  Matrix e_;
  Matrix f_;
  Eigen::FullPivLU<Matrix> lu_;
};

}  // namespace

// ---------------------------------------------------------------------------

ResolventOp::ResolventOp(Space space, Binder binder, std::string name,
                         Traits traits)
    : impl_(std::make_shared<const Impl>(Impl{std::move(space),
                                              std::move(binder),
                                              std::move(name),
                                              std::move(traits)})) {}

VectorMap ResolventOp::bind(double gamma) const {
  check_gamma(gamma, "resolvent");
  return impl_->binder(gamma);
}

Vector ResolventOp::resolvent(double gamma, const Vector& x) const {
  check_point(impl_->space, x, "resolvent");
  return bind(gamma)(x);
}

LipschitzMap::LipschitzMap(Space space, VectorMap eval, double chi,
                           std::string name, std::optional<AffineData> affine,
                           bool is_zero)
    : impl_(std::make_shared<const Impl>(Impl{std::move(space),
                                              std::move(eval), chi,
                                              std::move(name),
                                              std::move(affine), is_zero})) {
  if (!(chi >= 0.0) || !std::isfinite(chi)) {
    throw ConfigError("lipschitz map: constant must be finite and >= 0");
  }
}

Vector LipschitzMap::operator()(const Vector& x) const {
  return impl_->eval(x);
}

Vector reflect(const ResolventOp& op, double gamma, const Vector& x) {
  return 2.0 * op.resolvent(gamma, x) - x;
}

Vector partial_inverse_resolvent(const PartialInverseView& view,
                                 const Vector& x) {
  check_same_space(view.base.space(), view.projector.space(),
                   "partial_inverse_resolvent");
  check_point(view.base.space(), x, "partial_inverse_resolvent");
  const Vector reflected = reflect(view.base, view.gamma, x);
  // R_{N_V} = 2 P_V - Id
  const Vector twice = 2.0 * view.projector.apply(reflected) - reflected;
  return 0.5 * (x + twice);
}

std::pair<Vector, Vector> partial_inverse_pair(const AffineData& op,
                                               const Projector& projector,
                                               double gamma, double delta,
                                               const Vector& x) {
  check_gamma(gamma, "partial_inverse_pair");
  check_gamma(delta, "partial_inverse_pair");
  check_point(projector.space(), x, "partial_inverse_pair");
  return AffinePartialStep(op, projector, gamma, delta).solve(x);
}

ResolventOp partial_inverse(const ResolventOp& op, const Projector& subspace) {
  check_same_space(op.space(), subspace.space(), "partial_inverse");
  if (subspace.is_identity()) return op;
  if (subspace.is_zero()) return catalog::inverse(op);

  const std::string name = "partial_inverse(" + op.name() + ")";
  ResolventOp::Traits traits;

  if (op.traits().affine) {
    const AffineData affine = *op.traits().affine;
    auto binder = [affine, subspace](double gamma) -> VectorMap {
      // J_{gamma A_W} = J_{delta (1 A)_W} with delta = gamma.
      auto step =
          std::make_shared<const AffinePartialStep>(affine, subspace, 1.0, gamma);
      return [step, subspace](const Vector& x) {
        auto [p, q] = step->solve(x);
        return Vector(subspace.apply(p) + subspace.apply_complement(q));
      };
    };
    return ResolventOp(op.space(), std::move(binder), name, std::move(traits));
  }

  if (op.traits().separable && subspace.is_coordinate()) {
    const ResolventOp::ScalarResolvent scalar = op.traits().separable;
    Vector in_subspace = subspace.matrix().diagonal();
    auto component = [scalar, in_subspace](Index i, double gamma, double x) {
      if (in_subspace(i) == 1.0) return scalar(i, gamma, x);
      return x - gamma * scalar(i, 1.0 / gamma, x / gamma);
    };
    traits.separable = component;
    auto binder = [component, n = op.space().dim()](double gamma) -> VectorMap {
      return [component, gamma, n](const Vector& x) {
        Vector out(n);
        for (Index i = 0; i < n; ++i) out(i) = component(i, gamma, x(i));
        return out;
      };
    };
    return ResolventOp(op.space(), std::move(binder), name, std::move(traits));
  }

  auto binder = [op, subspace](double gamma) -> VectorMap {
    if (gamma != 1.0) {
      throw UnsupportedError(
          "partial inverse of '" + op.name() +
          "': no closed-form resolvent for step size != 1 with a general "
          "subspace (supply an affine operator, or a separable operator with "
          "a coordinate subspace)");
    }
    VectorMap j = op.bind(1.0);
    return [j, subspace](const Vector& x) {
      const Vector p = j(x);
      return Vector(subspace.apply(p) + subspace.apply_complement(x - p));
    };
  };
  return ResolventOp(op.space(), std::move(binder), name, std::move(traits));
}

Vector partial_sum_resolvent(const ResolventOp& a, const ResolventOp& b,
                             const Projector& subspace, double gamma,
                             const Vector& x) {
  check_same_space(a.space(), b.space(), "partial_sum_resolvent");
  check_same_space(a.space(), subspace.space(), "partial_sum_resolvent");
  check_point(a.space(), x, "partial_sum_resolvent");
  check_gamma(gamma, "partial_sum_resolvent");
  const auto& ta = a.traits();
  const auto& tb = b.traits();
  const Index n = a.space().dim();

  if (subspace.is_identity()) {
    if (tb.is_zero) return a.resolvent(gamma, x);
    if (ta.is_zero) return b.resolvent(gamma, x);
    if (ta.affine && tb.affine) {
      const Matrix m = ta.affine->matrix + tb.affine->matrix;
      const Vector c = ta.affine->offset + tb.affine->offset;
      return (Matrix::Identity(n, n) + gamma * m).fullPivLu().solve(x - gamma * c);
    }
  } else if (subspace.is_zero()) {
    // Parallel sum (A^{-1} + B^{-1})^{-1}.
    if (tb.inverse_is_zero) return a.resolvent(gamma, x);
    if (ta.inverse_is_zero) return b.resolvent(gamma, x);
    if (ta.affine && tb.affine && ta.affine->offset.isZero(0.0) &&
        tb.affine->offset.isZero(0.0)) {
      Eigen::FullPivLU<Matrix> la(ta.affine->matrix);
      Eigen::FullPivLU<Matrix> lb(tb.affine->matrix);
      if (la.isInvertible() && lb.isInvertible()) {
        const Matrix inv_sum = la.inverse() + lb.inverse();
        Eigen::FullPivLU<Matrix> ls(inv_sum);
        if (ls.isInvertible()) {
          const Matrix s = ls.inverse();
          return (Matrix::Identity(n, n) + gamma * s).fullPivLu().solve(x);
        }
      }
    }
  }
  throw UnsupportedError("partial sum of '" + a.name() + "' and '" + b.name() +
                         "': no closed form for this subspace/operator pair");
}

// ---------------------------------------------------------------------------
// Single-valued partial inverses.

MonotoneCertificate certify_strongly_monotone_cocoercive(double beta, double nu) {
  if (!(beta > 0.0) || !(nu > 0.0)) {
    throw ConfigError("certificate: beta and nu must be > 0");
  }
  return {beta, nu};
}

MonotoneCertificate certify_gradient(double beta, double gradient_lipschitz) {
  if (!(gradient_lipschitz > 0.0)) {
    throw ConfigError("certificate: gradient lipschitz constant must be > 0");
  }
  // Baillon-Haddad: a gradient with lipschitz constant l is 1/l-cocoercive.
  return certify_strongly_monotone_cocoercive(beta, 1.0 / gradient_lipschitz);
}

MonotoneCertificate certify_coercive_linear(const Space& space,
                                            const Matrix& matrix) {
  const LinearMap map(space, space, matrix);
  const Matrix e = map.euclidean_matrix();
  const Matrix sym = 0.5 * (e + e.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double beta = eig.eigenvalues().minCoeff();
  if (!(beta > 0.0)) {
    throw ConfigError("certificate: linear map is not strongly monotone");
  }
  const double norm = map.norm();
  return certify_strongly_monotone_cocoercive(beta, beta / (norm * norm));
}

Vector partial_inverse_apply_singlevalued(const LipschitzMap& d,
                                          const MonotoneCertificate& cert,
                                          const Projector& projector,
                                          const Vector& u) {
  check_same_space(d.space(), projector.space(),
                   "partial_inverse_apply_singlevalued");
  check_point(d.space(), u, "partial_inverse_apply_singlevalued");
  // y in D_V u  <=>  P y + P^perp u = D(a),  a = P u + P^perp y.
  // Unknown a: P a = P u, P^perp D(a) = P^perp u; then y = P D(a) + P^perp a.
  if (d.affine()) {
    const Matrix& m = d.affine()->matrix;
    const Vector& c = d.affine()->offset;
    const Matrix& p = projector.matrix();
    const Index n = m.rows();
    const Matrix pc = Matrix::Identity(n, n) - p;
    const Matrix system = p + pc * m;
    const Vector a = system.fullPivLu().solve(p * u + pc * (u - c));
    return p * (m * a + c) + pc * a;
  }

  const double lip = std::max(d.chi(), 1e-300);
  const double tau = std::min(0.5 / (1.0 + lip), cert.beta / (lip * lip));
  const Vector pu = projector.apply(u);
  Vector w = projector.apply_complement(u);
  const double scale = std::max(1.0, d.space().norm(u));
  constexpr int kMaxSteps = 10000;
  for (int step = 0; step < kMaxSteps; ++step) {
    const Vector a = pu + w;
    const Vector da = d(a);
    const Vector residual = projector.apply_complement(da - u);
    if (d.space().norm(residual) <= 1e-10 * scale) {
      return projector.apply(da) + w;
    }
    w -= tau * residual;
  }
  throw ConvergenceError(
      "partial_inverse_apply_singlevalued: inner iteration did not converge "
      "in 10000 steps (degenerate certificate?)");
}

LipschitzMap partial_inverse_map(const LipschitzMap& d,
                                 const MonotoneCertificate& cert,
                                 const Projector& projector) {
  check_same_space(d.space(), projector.space(), "partial_inverse_map");
  const double chi = 1.0 / cert.alpha();
  const std::string name = "partial_inverse(" + d.name() + ")";
  if (d.affine()) {
    // y = (P M + P^perp) S^{-1} (u - P^perp c) + P c,  S = P + P^perp M.
    const Matrix& m = d.affine()->matrix;
    const Vector& c = d.affine()->offset;
    const Matrix& p = projector.matrix();
    const Index n = m.rows();
    const Matrix pc = Matrix::Identity(n, n) - p;
    Eigen::FullPivLU<Matrix> lu(p + pc * m);
    if (!lu.isInvertible()) {
      throw ConfigError("partial_inverse_map: operator is not strongly monotone");
    }
    const Matrix k = (p * m + pc) * lu.inverse();
    const Vector offset = p * c - k * (pc * c);
    AffineData data{k, offset};
    auto eval = [k, offset](const Vector& x) { return Vector(k * x + offset); };
    return LipschitzMap(d.space(), std::move(eval), chi, name, std::move(data));
  }
  auto eval = [d, cert, projector](const Vector& x) {
    return partial_inverse_apply_singlevalued(d, cert, projector, x);
  };
  return LipschitzMap(d.space(), std::move(eval), chi, name);
}

LipschitzMap transported(const LipschitzMap& b, const Projector& projector,
                         double gamma) {
  check_same_space(b.space(), projector.space(), "transported");
  check_gamma(gamma, "transported");
  std::optional<AffineData> affine;
  if (b.affine()) {
    const Matrix& p = projector.matrix();
    affine = AffineData{gamma * p * b.affine()->matrix * p,
                        gamma * (p * b.affine()->offset)};
  }
  auto eval = [b, projector, gamma](const Vector& x) {
    return Vector(gamma * projector.apply(b(projector.apply(x))));
  };
  return LipschitzMap(b.space(), std::move(eval), gamma * b.chi(),
                      "transported(" + b.name() + ")", std::move(affine),
                      b.is_zero());
}

// ---------------------------------------------------------------------------
// Probes

ProbeReport probe(const Space& space, const VectorMap& map, int n_samples,
                  double radius, std::uint64_t seed) {
  Rng rng(seed);
  ProbeReport report;
  report.min_inner = std::numeric_limits<double>::infinity();
  report.min_strong_ratio = std::numeric_limits<double>::infinity();
  report.min_cocoercive_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    const Vector x = random_in_ball(rng, space, radius);
    const Vector y = random_in_ball(rng, space, radius);
    const Vector dx = x - y;
    const double ndx2 = space.squared_norm(dx);
    if (ndx2 == 0.0) continue;
    const Vector dt = map(x) - map(y);
    const double inner = space.inner(dx, dt);
    const double ndt2 = space.squared_norm(dt);
    report.min_inner = std::min(report.min_inner, inner);
    report.max_ratio = std::max(report.max_ratio, std::sqrt(ndt2 / ndx2));
    report.min_strong_ratio = std::min(report.min_strong_ratio, inner / ndx2);
    if (ndt2 > 0.0) {
      report.min_cocoercive_ratio =
          std::min(report.min_cocoercive_ratio, inner / ndt2);
    }
  }
  return report;
}

double probe_monotone(const Space& space, const VectorMap& map, int n_samples,
                      double radius, std::uint64_t seed) {
  return probe(space, map, n_samples, radius, seed).min_inner;
}

double probe_lipschitz(const Space& space, const VectorMap& map, int n_samples,
                       double radius, std::uint64_t seed) {
  return probe(space, map, n_samples, radius, seed).max_ratio;
}

double probe_firm_nonexpansive(const Space& space, const VectorMap& map,
                               int n_samples, double radius,
                               std::uint64_t seed) {
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    const Vector x = random_in_ball(rng, space, radius);
    const Vector y = random_in_ball(rng, space, radius);
    const Vector dj = map(x) - map(y);
    worst = std::max(worst, space.squared_norm(dj) - space.inner(x - y, dj));
  }
  return worst;
}

}  // namespace fpif
