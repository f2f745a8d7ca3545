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

#include "fpif/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fpif/error.hpp"
#include "fpif/log.hpp"

namespace fpif {

namespace {

// gamma P B P v; zero when B is.
Vector forward(const InclusionProblem& prob, double gamma, const Vector& v) {
  if (prob.b.is_zero()) return Vector::Zero(v.size());
  return gamma * prob.v.apply(prob.b(prob.v.apply(v)));
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Runs exactly `iterations` steps unless the residual is exactly zero.
StopRule exact_stop(long iterations) {
  StopRule stop;
  stop.max_iter = iterations;
  stop.residual_tol = std::numeric_limits<double>::min();
  stop.iterate_tol = std::numeric_limits<double>::min();
  return stop;
}

// Compares two snapshot lists; a shorter one is held at its last state.
double max_snapshot_deviation(const Space& space, const SolveTrace& a,
                              const SolveTrace& b) {
  const auto& sa = a.snapshots();
  const auto& sb = b.snapshots();
  const std::size_t n = std::max(sa.size(), sb.size());
  double dev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vector& u = sa[std::min(k, sa.size() - 1)].second;
    const Vector& v = sb[std::min(k, sb.size() - 1)].second;
    dev = std::max(dev, space.norm(u - v));
  }
  return dev;
}

}  // namespace

void InclusionProblem::validate() const {
  if (!(a.space() == b.space()) || !(a.space() == v.space())) {
    throw DimensionError("fpif: A, B and V must share one space");
  }
  const double chi = b.chi();
  if (!(gamma > 0.0) || !std::isfinite(gamma) ||
      (chi > 0.0 && !(gamma * chi < 1.0))) {
    throw ConfigError("gamma = " + num(gamma) +
                      " violates gamma in ]0, 1/chi[ with chi = " + num(chi) +
                      (chi > 0.0 ? " (1/chi = " + num(1.0 / chi) + ")" : ""));
  }
}

double default_gamma(double chi) { return chi > 0.0 ? 0.9 / chi : 1.0; }

FpifStep fpif_step(const InclusionProblem& prob, const VectorMap& resolvent,
                   const Vector& z) {
  const double gamma = prob.gamma;
  const Projector& pv = prob.v;
  FpifStep st;
  st.r = z - forward(prob, gamma, z);
  st.p = resolvent(st.r);
  st.s = 2.0 * pv.apply(st.p) - st.p + st.r - pv.apply(st.r);
  st.t = st.s - forward(prob, gamma, st.s);
  return st;
}

FpifResult fpif_solve(const InclusionProblem& prob, const Vector& x0,
                      const Vector& y0, const StepSchedule& schedule,
                      const StopRule& stop, const SolveOptions& options) {
  prob.validate();
  const Space& space = prob.a.space();
  const Projector& pv = prob.v;
  const double gamma = prob.gamma;
  check_point(space, x0, "fpif x0");
  check_point(space, y0, "fpif y0");
  schedule.validate(gamma * prob.b.chi());
  stop.validate();

  Vector x = x0;
  Vector y = y0;
  const double tol_x = 1e-9 * std::max(1.0, space.norm(x0));
  const double tol_y = 1e-9 * std::max(1.0, space.norm(y0));
  if (space.norm(pv.apply_complement(x0)) > tol_x) {
    log::warn("fpif: x0 is not in V; projecting");
    x = pv.apply(x0);
  }
  if (space.norm(pv.apply(y0)) > tol_y) {
    log::warn("fpif: y0 is not in V^perp; projecting");
    y = pv.apply_complement(y0);
  }

  const bool unit_delta = schedule.delta.is_constant() && schedule.delta(0) == 1.0;
  const AffineData* affine =
      prob.a.traits().affine ? &*prob.a.traits().affine : nullptr;
  if (!unit_delta && affine == nullptr) {
    throw UnsupportedError(
        "fpif: delta_n != 1 needs an affine A (the implicit step has no "
        "closed form for " + prob.a.name() + ")");
  }

  SolveTrace trace({"x_confinement", "y_confinement"});
  IterationRecorder recorder(trace, stop, options);
  Vector z = x + gamma * y;
  recorder.start(z);
  const VectorMap resolvent =
      unit_delta ? prob.a.bind(gamma) : VectorMap();

  for (long n = 0;; ++n) {
    const double delta = schedule.delta(n);
    const double lambda = schedule.lambda(n);
    Vector r, s, t;
    if (unit_delta) {
      FpifStep st = fpif_step(prob, resolvent, z);
      r = std::move(st.r);
      s = std::move(st.s);
      t = std::move(st.t);
    } else {
      r = z - forward(prob, delta * gamma, z);
      auto [p, q] = partial_inverse_pair(*affine, pv, gamma, delta, r);
      s = pv.apply(p) + gamma * pv.apply_complement(q);
      t = s - forward(prob, delta * gamma, s);
    }
    const Vector diff = t - r;
    const Vector z_next = z + lambda * diff;
    const Vector x_next = pv.apply(z_next);
    const Vector y_next = pv.apply_complement(z_next) / gamma;
    const double residual = space.norm(diff);
    const double step = space.norm(z_next - z);
    const double scale = std::max(1.0, space.norm(z));
    if (options.observer) {
      options.observer(IterationView{n, z, r, s, t, z_next, delta, lambda});
    }
    const bool done = recorder.record(
        n, residual, scale, delta, lambda, step,
        {space.norm(pv.apply_complement(x_next)), space.norm(pv.apply(y_next))},
        z_next);
    if (trace.status == SolveStatus::kDiverged) break;
    z = z_next;
    if (done) break;
  }
  PrimalDualPoint point{pv.apply(z), pv.apply_complement(z) / gamma};
  return FpifResult{std::move(point), std::move(z), std::move(trace)};
}

FpifResiduals fpif_residuals(const InclusionProblem& prob, const Vector& z) {
  prob.validate();
  const Space& space = prob.a.space();
  check_point(space, z, "fpif state");
  const Projector& pv = prob.v;
  const double gamma = prob.gamma;
  const VectorMap resolvent = prob.a.bind(gamma);
  const FpifStep st = fpif_step(prob, resolvent, z);
  FpifResiduals res;
  res.fixed_point = space.norm(st.t - st.r);
  res.relative = res.fixed_point / std::max(1.0, space.norm(z));
  const Vector x = pv.apply(z);
  const Vector y = pv.apply_complement(z) / gamma;
  res.x_confinement = space.norm(pv.apply_complement(x));
  res.y_confinement = space.norm(pv.apply(y));
  const Vector pbx = prob.b.is_zero() ? Vector::Zero(x.size())
                                      : Vector(pv.apply(prob.b(x)));
  res.inclusion = space.norm(x - resolvent(x + gamma * (y - pbx)));
  return res;
}

double reduce_to_tseng_check(const InclusionProblem& prob, const Vector& z0,
                             long iterations) {
  if (!prob.v.is_identity()) {
    throw ConfigError("reduce_to_tseng_check: V must be the whole space");
  }
  const Space& space = prob.a.space();
  const StopRule stop = exact_stop(iterations);
  StepSchedule unit;
  SolveOptions keep;
  keep.dense_snapshot_limit = iterations + 1;

  const FpifResult a = fpif_solve(prob, z0, Vector::Zero(space.dim()), unit,
                                  stop, keep);
  StepSchedule tseng_sched;
  tseng_sched.delta = Sequence::constant(prob.gamma);
  const auto [zt, trace_t] =
      tseng_solve(prob.a, prob.b, z0, tseng_sched, stop, keep);

  return max_snapshot_deviation(space, a.trace, trace_t);
}

double reduce_to_dr_check(const InclusionProblem& prob, const Vector& z0,
                          const Sequence& lambda, long iterations) {
  if (!prob.b.is_zero()) {
    throw ConfigError("reduce_to_dr_check: B must be the zero map");
  }
  const Space& space = prob.a.space();
  const Projector& pv = prob.v;
  StopRule stop = exact_stop(iterations);
  StepSchedule sched;
  sched.lambda = lambda;
  SolveOptions keep;
  keep.dense_snapshot_limit = iterations + 1;
  const FpifResult a = fpif_solve(prob, pv.apply(z0),
                                  pv.apply_complement(z0) / prob.gamma, sched,
                                  stop, keep);

  // The recursion written with reflections, from the same starting point.
  const PartialInverseView view{prob.a, pv, prob.gamma};
  SolveTrace dr;
  Vector z = a.trace.snapshots().front().second;
  dr.add_snapshot(0, z);
  for (long n = 0; n + 1 < static_cast<long>(a.trace.snapshots().size()); ++n) {
    const Vector s = partial_inverse_resolvent(view, z);
    z = z + lambda(n) * (s - z);
    dr.add_snapshot(n + 1, z);
  }
  return max_snapshot_deviation(space, a.trace, dr);
}

}  // namespace fpif
