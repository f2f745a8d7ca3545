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

#include "fpif/sum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "fpif/error.hpp"

namespace fpif {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double max_block_norm(const Space& space, const std::vector<Vector>& v) {
  double out = 0.0;
  for (const auto& b : v) out = std::max(out, space.norm(b));
  return out;
}

struct SumStep {
  Vector x;
  Vector q;
  std::vector<Vector> r, p, s, t;
};

SumStep sum_step(const SumProblem& prob, const std::vector<double>& w,
                 const std::vector<VectorMap>& resolvents,
                 const std::vector<Vector>& z) {
  const std::size_t m = prob.m();
  const double gamma = prob.gamma;
  SumStep st;
  st.x = weighted_mean(w, z);
  const bool has_b = !prob.b.is_zero();
  const Vector gbx = has_b ? Vector(gamma * prob.b(st.x))
                           : Vector(Vector::Zero(st.x.size()));
  st.r.resize(m);
  st.p.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    st.r[i] = z[i] - gbx;
    st.p[i] = resolvents[i](st.r[i]);
  }
  st.q = weighted_mean(w, st.p);
  const Vector gbq = has_b ? Vector(gamma * prob.b(st.q))
                           : Vector(Vector::Zero(st.q.size()));
  st.s.resize(m);
  st.t.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    st.s[i] = 2.0 * st.q - st.p[i] + z[i] - st.x;
    st.t[i] = st.s[i] - gbq;
  }
  return st;
}

std::vector<VectorMap> bind_all(const SumProblem& prob,
                                const std::vector<double>& w) {
  std::vector<VectorMap> out;
  out.reserve(prob.m());
  for (std::size_t i = 0; i < prob.m(); ++i) {
    out.push_back(prob.ops[i].bind(prob.gamma / w[i]));
  }
  return out;
}

}  // namespace

std::vector<double> SumProblem::resolved_weights() const {
  if (!weights.empty()) return weights;
  return std::vector<double>(ops.size(), 1.0 / static_cast<double>(ops.size()));
}

void SumProblem::validate() const {
  if (ops.empty()) throw ConfigError("sum-m: at least one operator is required");
  for (const auto& op : ops) {
    if (!(op.space() == ops.front().space())) {
      throw DimensionError("sum-m: operators live in different spaces");
    }
  }
  if (!(b.space() == ops.front().space())) {
    throw DimensionError("sum-m: B lives in a different space");
  }
  if (!weights.empty()) {
    if (weights.size() != ops.size()) {
      throw ConfigError("sum-m: " + std::to_string(weights.size()) +
                        " weights for " + std::to_string(ops.size()) +
                        " operators");
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w > 0.0) || !(w <= 1.0)) {
        throw ConfigError("sum-m: weights must lie in ]0, 1]");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ConfigError("sum-m: weights sum to " + num(total) +
                        ", expected 1");
    }
  }
  const double chi = b.chi();
  if (!(gamma > 0.0) || !std::isfinite(gamma) ||
      (chi > 0.0 && !(gamma * chi < 1.0))) {
    throw ConfigError("gamma = " + num(gamma) +
                      " violates gamma in ]0, 1/chi[ with chi = " + num(chi));
  }
}

Space sum_product_space(const SumProblem& prob) {
  const auto w = prob.resolved_weights();
  const Space& base = prob.ops.at(0).space();
  std::vector<Space> factors;
  for (double wi : w) factors.emplace_back(Vector(base.weights() * wi));
  return product_space(factors);
}

Projector sum_diagonal_projector(const SumProblem& prob) {
  const auto w = prob.resolved_weights();
  const Index n = prob.ops.at(0).space().dim();
  const auto m = static_cast<Index>(w.size());
  Matrix p = Matrix::Zero(m * n, m * n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      p.block(i * n, j * n, n, n) =
          w[static_cast<std::size_t>(j)] * Matrix::Identity(n, n);
    }
  }
  return Projector(sum_product_space(prob), std::move(p));
}

Vector weighted_mean(const std::vector<double>& weights,
                     const std::vector<Vector>& v) {
  const std::size_t m = v.size();
  if (m == 0 || weights.size() != m) {
    throw DimensionError("weighted_mean: block count mismatch");
  }
  const Index n = v.front().size();
  Vector out(n);
  std::vector<double> terms(m);
  for (Index k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) terms[i] = weights[i] * v[i](k);
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    out(k) = acc;
  }
  return out;
}

Vector flatten(const std::vector<Vector>& blocks) {
  Index total = 0;
  for (const auto& b : blocks) total += b.size();
  Vector out(total);
  Index off = 0;
  for (const auto& b : blocks) {
    out.segment(off, b.size()) = b;
    off += b.size();
  }
  return out;
}

std::vector<Vector> unflatten(const Vector& flat, std::size_t m, Index dim) {
  if (flat.size() != static_cast<Index>(m) * dim) {
    throw DimensionError("unflatten: expected " +
                         std::to_string(static_cast<Index>(m) * dim) +
                         " entries, got " + std::to_string(flat.size()));
  }
  std::vector<Vector> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = flat.segment(static_cast<Index>(i) * dim, dim);
  }
  return out;
}

SumResult sum_solve(const SumProblem& prob, const std::vector<Vector>& z0,
                    const Sequence& lambda, const StopRule& stop,
                    const SolveOptions& options) {
  prob.validate();
  const std::size_t m = prob.m();
  const Space& space = prob.ops.front().space();
  const auto w = prob.resolved_weights();
  std::vector<Vector> z = z0;
  if (z.empty()) z.assign(m, Vector::Zero(space.dim()));
  if (z.size() != m) {
    throw DimensionError("sum-m: " + std::to_string(z.size()) +
                         " initial points for " + std::to_string(m) +
                         " operators");
  }
  for (const auto& zi : z) check_point(space, zi, "sum-m initial point");
  StepSchedule sched;
  sched.lambda = lambda;
  sched.validate(prob.gamma * prob.b.chi());
  stop.validate();

  const auto resolvents = bind_all(prob, w);
  SolveTrace trace({"consensus_drift"});
  IterationRecorder recorder(trace, stop, options);
  recorder.start(flatten(z));

  for (long n = 0;; ++n) {
    const double l = lambda(n);
    const SumStep st = sum_step(prob, w, resolvents, z);
    std::vector<Vector> z_next(m);
    double residual = 0.0;
    double step = 0.0;
    double drift = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Vector diff = st.t[i] - st.r[i];
      z_next[i] = z[i] + l * diff;
      residual = std::max(residual, space.norm(diff));
      step = std::max(step, space.norm(z_next[i] - z[i]));
      drift = std::max(drift, space.norm(z[i] - st.x));
    }
    const double scale = std::max(1.0, max_block_norm(space, z));
    const Vector flat_next = flatten(z_next);
    if (options.observer) {
      const Vector fz = flatten(z);
      const Vector fr = flatten(st.r);
      const Vector fs = flatten(st.s);
      const Vector ft = flatten(st.t);
      options.observer(IterationView{n, fz, fr, fs, ft, flat_next, 1.0, l});
    }
    const bool done =
        recorder.record(n, residual, scale, 1.0, l, step, {drift}, flat_next);
    if (trace.status == SolveStatus::kDiverged) break;
    z = std::move(z_next);
    if (done) break;
  }
  Vector x = weighted_mean(w, z);
  return SumResult{std::move(x), std::move(z), std::move(trace)};
}

SumResiduals sum_residuals(const SumProblem& prob,
                           const std::vector<Vector>& z) {
  prob.validate();
  const Space& space = prob.ops.front().space();
  if (z.size() != prob.m()) throw DimensionError("sum-m: block count mismatch");
  for (const auto& zi : z) check_point(space, zi, "sum-m state");
  const auto w = prob.resolved_weights();
  const SumStep st = sum_step(prob, w, bind_all(prob, w), z);
  SumResiduals res;
  Vector total = prob.b.is_zero() ? Vector(Vector::Zero(space.dim()))
                                  : Vector(prob.b(st.q));
  for (std::size_t i = 0; i < prob.m(); ++i) {
    res.fixed_point = std::max(res.fixed_point, space.norm(st.t[i] - st.r[i]));
    res.consensus = std::max(res.consensus, space.norm(st.p[i] - st.q));
    total += w[i] * (st.r[i] - st.p[i]) / prob.gamma;
  }
  res.relative = res.fixed_point / std::max(1.0, max_block_norm(space, z));
  res.certificate = space.norm(total);
  return res;
}

SumResult two_op_parallel_solve(const ResolventOp& a1, const ResolventOp& a2,
                                const Vector& z10, const Vector& z20,
                                double gamma, const Sequence& lambda,
                                const StopRule& stop,
                                const SolveOptions& options) {
  const Space& space = a1.space();
  if (!(a2.space() == space)) {
    throw DimensionError("two-operator method: A1 and A2 differ in space");
  }
  check_point(space, z10, "z1 initial point");
  check_point(space, z20, "z2 initial point");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  StepSchedule sched;
  sched.lambda = lambda;
  sched.validate(0.0);
  stop.validate();

  const VectorMap j1 = a1.bind(2.0 * gamma);
  const VectorMap j2 = a2.bind(2.0 * gamma);
  SolveTrace trace({"consensus_drift"});
  IterationRecorder recorder(trace, stop, options);
  Vector z1 = z10;
  Vector z2 = z20;
  recorder.start(flatten({z1, z2}));
  for (long n = 0;; ++n) {
    const double l = lambda(n);
    const Vector x = (z1 + z2) / 2.0;
    const Vector p1 = j1(z1);
    const Vector p2 = j2(z2);
    const Vector d1 = p2 - x;
    const Vector d2 = p1 - x;
    Vector n1 = z1 + l * d1;
    Vector n2 = z2 + l * d2;
    const double residual = std::max(space.norm(d1), space.norm(d2));
    const double step =
        std::max(space.norm(n1 - z1), space.norm(n2 - z2));
    const double drift = std::max(space.norm(z1 - x), space.norm(z2 - x));
    const double scale =
        std::max({1.0, space.norm(z1), space.norm(z2)});
    const Vector flat_next = flatten({n1, n2});
    const bool done =
        recorder.record(n, residual, scale, 1.0, l, step, {drift}, flat_next);
    if (trace.status == SolveStatus::kDiverged) break;
    z1 = std::move(n1);
    z2 = std::move(n2);
    if (done) break;
  }
  Vector x = (z1 + z2) / 2.0;
  return SumResult{std::move(x), {z1, z2}, std::move(trace)};
}

}  // namespace fpif
