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

#include "fpif/primal_dual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "fpif/error.hpp"
#include "fpif/sum.hpp"

namespace fpif {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Operators bound at one gamma plus cached adjoints.
struct PDBound {
  VectorMap ja;
  std::vector<VectorMap> jb;
  std::vector<LinearMap> lstar;
};

PDBound bind(const PDProblem& prob, double gamma) {
  PDBound out{prob.a.bind(gamma), {}, {}};
  for (const auto& blk : prob.blocks) {
    out.jb.push_back(blk.b_partial.bind(gamma));
    out.lstar.push_back(blk.l.adjoint());
  }
  return out;
}

struct PDStep {
  Vector r1, p1, s1, t1;
  std::vector<Vector> r2, p2, s2, t2;
};

// sum_i L_i^* P_{V_i} u_i
Vector coupling_sum(const PDProblem& prob, const PDBound& bound,
                    const std::vector<Vector>& u) {
  Vector acc = Vector::Zero(prob.a.space().dim());
  for (std::size_t i = 0; i < prob.blocks.size(); ++i) {
    acc += bound.lstar[i].apply(prob.blocks[i].v.apply(u[i]));
  }
  return acc;
}

PDStep pd_step(const PDProblem& prob, const PDBound& bound, double gamma,
               const Vector& x, const std::vector<Vector>& u) {
  const Projector& pu = prob.u;
  const std::size_t m = prob.blocks.size();
  PDStep st;
  const Vector pux = pu.apply(x);
  st.r1 = x - gamma * pu.apply(prob.c(pux) + coupling_sum(prob, bound, u));
  st.p1 = bound.ja(st.r1 + gamma * prob.z);
  st.s1 = 2.0 * pu.apply(st.p1) - st.p1 + st.r1 - pu.apply(st.r1);
  const Vector pus1 = pu.apply(st.s1);
  st.r2.resize(m);
  st.p2.resize(m);
  st.s2.resize(m);
  st.t2.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const PDBlock& blk = prob.blocks[i];
    const Projector& pv = blk.v;
    st.r2[i] = u[i] - gamma * pv.apply(blk.d_partial(pv.apply(u[i])) -
                                       blk.l.apply(pux));
    st.p2[i] = bound.jb[i](st.r2[i] - gamma * pv.apply(blk.b));
    st.s2[i] = 2.0 * pv.apply(st.p2[i]) - st.p2[i] + st.r2[i] -
               pv.apply(st.r2[i]);
    st.t2[i] = st.s2[i] - gamma * pv.apply(blk.d_partial(pv.apply(st.s2[i])) -
                                           blk.l.apply(pus1));
  }
  st.t1 = st.s1 -
          gamma * pu.apply(prob.c(pus1) + coupling_sum(prob, bound, st.s2));
  return st;
}

void check_gamma_range(double gamma, double chi) {
  if (!(gamma > 0.0) || !std::isfinite(gamma) ||
      (chi > 0.0 && !(gamma * chi < 1.0))) {
    throw ConfigError("gamma = " + num(gamma) +
                      " violates gamma in ]0, 1/chi[ with chi = " + num(chi) +
                      (chi > 0.0 ? " (1/chi = " + num(1.0 / chi) + ")" : ""));
  }
}

std::vector<Vector> initial_duals(const PDProblem& prob,
                                  const std::vector<Vector>& u0) {
  std::vector<Vector> u = u0;
  if (u.empty()) {
    for (const auto& blk : prob.blocks) {
      u.push_back(Vector::Zero(blk.v.space().dim()));
    }
  }
  if (u.size() != prob.blocks.size()) {
    throw DimensionError("primal-dual: " + std::to_string(u.size()) +
                         " dual initial points for " +
                         std::to_string(prob.blocks.size()) + " blocks");
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    check_point(prob.blocks[i].v.space(), u[i], "primal-dual u0");
  }
  return u;
}

Vector flatten_state(const Vector& x, const std::vector<Vector>& u) {
  std::vector<Vector> parts;
  parts.reserve(u.size() + 1);
  parts.push_back(x);
  for (const auto& ui : u) parts.push_back(ui);
  return flatten(parts);
}

}  // namespace

PDBlock pd_block(const ResolventOp& b_op, LipschitzMap d_partial, LinearMap l,
                 Projector v, Vector b) {
  ResolventOp partial = partial_inverse(b_op, v.complement());
  return PDBlock{std::move(partial), std::move(d_partial), std::move(l),
                 std::move(v), std::move(b)};
}

void PDProblem::validate_structure() const {
  const Space& h = a.space();
  if (!(u.space() == h) || !(c.space() == h)) {
    throw DimensionError("primal-dual: A, U and C must share the space H");
  }
  check_point(h, z, "primal-dual z");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const PDBlock& blk = blocks[i];
    const Space& g = blk.v.space();
    const std::string tag = "primal-dual block " + std::to_string(i);
    if (!(blk.b_partial.space() == g) || !(blk.d_partial.space() == g)) {
      throw DimensionError(tag + ": B, D and V must share the space G_i");
    }
    if (!(blk.l.domain() == h) || !(blk.l.codomain() == g)) {
      throw DimensionError(tag + ": L_i must map H to G_i");
    }
    check_point(g, blk.b, "primal-dual b_i");
  }
}

double PDProblem::chi() const {
  double lip = c.chi();
  double sq = 0.0;
  for (const auto& blk : blocks) {
    lip = std::max(lip, blk.d_partial.chi());
    const double ln = 1.01 * blk.l.norm_power(50, 1e-10);
    sq += ln * ln;
  }
  return lip + std::sqrt(sq);
}

Space pd_product_space(const PDProblem& prob) {
  std::vector<Space> factors{prob.a.space()};
  for (const auto& blk : prob.blocks) factors.push_back(blk.v.space());
  return product_space(factors);
}

PDResult pd_solve(const PDProblem& prob, double gamma, const Vector& x0,
                  const std::vector<Vector>& u0, const Sequence& lambda,
                  const StopRule& stop, const SolveOptions& options) {
  prob.validate_structure();
  const double chi = prob.chi();
  check_gamma_range(gamma, chi);
  check_point(prob.a.space(), x0, "primal-dual x0");
  std::vector<Vector> u = initial_duals(prob, u0);
  StepSchedule sched;
  sched.lambda = lambda;
  sched.validate(gamma * chi);
  stop.validate();

  const std::size_t m = prob.blocks.size();
  const Space& h = prob.a.space();
  const PDBound bound = bind(prob, gamma);
  std::vector<std::string> extras;
  for (std::size_t i = 0; i < m; ++i) {
    extras.push_back("dual_residual_" + std::to_string(i + 1));
  }
  SolveTrace trace(extras);
  IterationRecorder recorder(trace, stop, options);
  Vector x = x0;
  recorder.start(flatten_state(x, u));

  for (long n = 0;; ++n) {
    const double l = lambda(n);
    const PDStep st = pd_step(prob, bound, gamma, x, u);
    const Vector d1 = st.t1 - st.r1;
    Vector x_next = x + l * d1;
    std::vector<Vector> u_next(m);
    double sq = h.squared_norm(d1);
    double zsq = h.squared_norm(x);
    double step_sq = h.squared_norm(x_next - x);
    std::vector<double> dual(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Space& g = prob.blocks[i].v.space();
      const Vector d2 = st.t2[i] - st.r2[i];
      u_next[i] = u[i] + l * d2;
      dual[i] = g.norm(d2);
      sq += dual[i] * dual[i];
      zsq += g.squared_norm(u[i]);
      step_sq += g.squared_norm(u_next[i] - u[i]);
    }
    const double residual = std::sqrt(sq);
    const double scale = std::max(1.0, std::sqrt(zsq));
    const Vector flat_next = flatten_state(x_next, u_next);
    if (options.observer) {
      const Vector fz = flatten_state(x, u);
      const Vector fr = flatten_state(st.r1, st.r2);
      const Vector fs = flatten_state(st.s1, st.s2);
      const Vector ft = flatten_state(st.t1, st.t2);
      options.observer(IterationView{n, fz, fr, fs, ft, flat_next, 1.0, l});
    }
    const bool done = recorder.record(n, residual, scale, 1.0, l,
                                      std::sqrt(step_sq), dual, flat_next);
    if (trace.status == SolveStatus::kDiverged) break;
    x = std::move(x_next);
    u = std::move(u_next);
    if (done) break;
  }
  PDResult out;
  out.x = prob.u.apply(x);
  for (std::size_t i = 0; i < m; ++i) {
    out.u.push_back(prob.blocks[i].v.apply(u[i]));
  }
  out.x_state = std::move(x);
  out.u_state = std::move(u);
  out.trace = std::move(trace);
  return out;
}

LinearMap pd_coupling(const PDProblem& prob) {
  prob.validate_structure();
  const Space space = pd_product_space(prob);
  const Index n = prob.a.space().dim();
  Matrix k = Matrix::Zero(space.dim(), space.dim());
  Index off = n;
  for (const auto& blk : prob.blocks) {
    const Index g = blk.v.space().dim();
    const Matrix pv = blk.v.matrix();
    const Matrix lstar = blk.l.adjoint().matrix();
    k.block(0, off, n, g) = lstar * pv;
    k.block(off, 0, g, n) = -(pv * blk.l.matrix());
    off += g;
  }
  return LinearMap(space, space, std::move(k));
}

InclusionProblem pd_product_inclusion(const PDProblem& prob, double gamma) {
  prob.validate_structure();
  const Space space = pd_product_space(prob);
  const Index n = prob.a.space().dim();
  std::vector<Index> dims;
  for (const auto& blk : prob.blocks) dims.push_back(blk.v.space().dim());

  ResolventOp::Binder binder = [prob, n, dims](double g) -> VectorMap {
    PDBound bound = bind(prob, g);
    return [prob, n, dims, g, bound](const Vector& w) {
      Vector out(w.size());
      out.head(n) = bound.ja(w.head(n) + g * prob.z);
      Index off = n;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        const PDBlock& blk = prob.blocks[i];
        out.segment(off, dims[i]) = bound.jb[i](
            w.segment(off, dims[i]) - g * blk.v.apply(blk.b));
        off += dims[i];
      }
      return out;
    };
  };
  ResolventOp a_prod(space, std::move(binder), "primal-dual A");

  const LinearMap coupling = pd_coupling(prob);
  VectorMap eval = [prob, n, dims, coupling](const Vector& w) {
    Vector out = coupling.apply(w);
    out.head(n) += prob.c(w.head(n));
    Index off = n;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      out.segment(off, dims[i]) +=
          prob.blocks[i].d_partial(w.segment(off, dims[i]));
      off += dims[i];
    }
    return out;
  };
  LipschitzMap b_prod(space, std::move(eval), prob.chi(), "primal-dual B");

  std::vector<Projector> parts{prob.u};
  for (const auto& blk : prob.blocks) parts.push_back(blk.v);
  return InclusionProblem{std::move(a_prod), std::move(b_prod),
                          product_projector(parts), gamma};
}

PDResiduals pd_residuals(const PDProblem& prob, double gamma, const Vector& x,
                         const std::vector<Vector>& u) {
  prob.validate_structure();
  check_gamma_range(gamma, prob.chi());
  check_point(prob.a.space(), x, "primal-dual x");
  const std::vector<Vector> uu = initial_duals(prob, u);
  const PDBound bound = bind(prob, gamma);
  const PDStep st = pd_step(prob, bound, gamma, x, uu);
  const Space& h = prob.a.space();
  PDResiduals res;
  double sq = h.squared_norm(st.t1 - st.r1);
  double zsq = h.squared_norm(x);
  for (std::size_t i = 0; i < uu.size(); ++i) {
    const Space& g = prob.blocks[i].v.space();
    const double d = g.norm(st.t2[i] - st.r2[i]);
    res.dual.push_back(d);
    sq += d * d;
    zsq += g.squared_norm(uu[i]);
  }
  res.fixed_point = std::sqrt(sq);
  res.relative = res.fixed_point / std::max(1.0, std::sqrt(zsq));

  const InclusionProblem inc = pd_product_inclusion(prob, gamma);
  const Vector state = flatten_state(x, uu);
  res.kkt = fpif_residuals(inc, state).inclusion;
  return res;
}

double pd_reduction_check(const PDProblem& prob, double gamma, const Vector& x0,
                          const std::vector<Vector>& u0, long iterations) {
  prob.validate_structure();
  if (!prob.u.is_identity()) {
    throw ConfigError("pd_reduction_check: U must be the whole space");
  }
  for (const auto& blk : prob.blocks) {
    if (!blk.v.is_identity()) {
      throw ConfigError("pd_reduction_check: every V_i must be all of G_i");
    }
  }
  StopRule stop;
  stop.max_iter = iterations;
  stop.residual_tol = std::numeric_limits<double>::min();
  stop.iterate_tol = std::numeric_limits<double>::min();
  SolveOptions keep;
  keep.dense_snapshot_limit = iterations + 1;
  const PDResult run =
      pd_solve(prob, gamma, x0, u0, Sequence::constant(1.0), stop, keep);

  // Projector-free recursion: every P_U and P_{V_i} dropped.
  const std::size_t m = prob.blocks.size();
  const PDBound bound = bind(prob, gamma);
  const Space space = pd_product_space(prob);
  Vector x = x0;
  std::vector<Vector> u = initial_duals(prob, u0);
  const auto& snaps = run.trace.snapshots();
  double dev = space.norm(snaps.front().second - flatten_state(x, u));
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    Vector lu = Vector::Zero(x.size());
    for (std::size_t i = 0; i < m; ++i) lu += bound.lstar[i].apply(u[i]);
    const Vector r1 = x - gamma * (prob.c(x) + lu);
    const Vector p1 = bound.ja(r1 + gamma * prob.z);
    std::vector<Vector> r2(m), p2(m), t2(m);
    Vector lp = Vector::Zero(x.size());
    for (std::size_t i = 0; i < m; ++i) {
      const PDBlock& blk = prob.blocks[i];
      r2[i] = u[i] - gamma * (blk.d_partial(u[i]) - blk.l.apply(x));
      p2[i] = bound.jb[i](r2[i] - gamma * blk.b);
      t2[i] = p2[i] - gamma * (blk.d_partial(p2[i]) - blk.l.apply(p1));
      lp += bound.lstar[i].apply(p2[i]);
    }
    const Vector t1 = p1 - gamma * (prob.c(p1) + lp);
    x = x + (t1 - r1);
    for (std::size_t i = 0; i < m; ++i) u[i] = u[i] + (t2[i] - r2[i]);
    dev = std::max(dev, space.norm(snaps[k].second - flatten_state(x, u)));
  }
  return dev;
}

PDTwoOpResult pd_two_op_special(const ResolventOp& b1, const ResolventOp& b2,
                                const Vector& x0, const Vector& u10,
                                const Vector& u20, double gamma,
                                const Sequence& lambda, const StopRule& stop,
                                const SolveOptions& options) {
  const Space& g = b1.space();
  if (!(b2.space() == g)) {
    throw DimensionError("two-operator primal-dual: B1 and B2 differ in space");
  }
  check_point(g, x0, "x0");
  check_point(g, u10, "u10");
  check_point(g, u20, "u20");
  const double chi = std::sqrt(2.0);
  check_gamma_range(gamma, chi);
  StepSchedule sched;
  sched.lambda = lambda;
  sched.validate(gamma * chi);
  stop.validate();

  const VectorMap j1 = catalog::inverse(b1).bind(gamma);
  const VectorMap j2 = catalog::inverse(b2).bind(gamma);
  const Space space = product_space(std::vector<Space>{g, g, g});
  SolveTrace trace;
  IterationRecorder recorder(trace, stop, options);
  Vector x = x0;
  Vector u1 = u10;
  Vector u2 = u20;
  recorder.start(flatten({x, u1, u2}));
  for (long n = 0;; ++n) {
    const double l = lambda(n);
    const Vector p1 = j1(u1 + gamma * x);
    const Vector p2 = j2(u2 + gamma * x);
    const Vector usum = u1 + u2;
    Vector xn = x - gamma * l * (p1 + p2);
    Vector u1n = (1.0 - l) * u1 + l * (p1 - gamma * gamma * usum);
    Vector u2n = (1.0 - l) * u2 + l * (p2 - gamma * gamma * usum);
    // t - r of the underlying iteration.
    const Vector dx = -gamma * (p1 + p2);
    const Vector d1 = p1 - gamma * gamma * usum - u1;
    const Vector d2 = p2 - gamma * gamma * usum - u2;
    const double residual = std::sqrt(g.squared_norm(dx) +
                                      g.squared_norm(d1) + g.squared_norm(d2));
    const double scale = std::max(
        1.0, std::sqrt(g.squared_norm(x) + g.squared_norm(u1) +
                       g.squared_norm(u2)));
    const Vector flat_next = flatten({xn, u1n, u2n});
    const double step = space.norm(flat_next - flatten({x, u1, u2}));
    const bool done =
        recorder.record(n, residual, scale, 1.0, l, step, {}, flat_next);
    if (trace.status == SolveStatus::kDiverged) break;
    x = std::move(xn);
    u1 = std::move(u1n);
    u2 = std::move(u2n);
    if (done) break;
  }
  const Vector p1 = j1(u1 + gamma * x);
  const Vector p2 = j2(u2 + gamma * x);
  const double cert = std::max({g.norm(p1 + p2), g.norm(u1 - p1) / gamma,
                                g.norm(u2 - p2) / gamma});
  return PDTwoOpResult{std::move(x), std::move(u1), std::move(u2),
                       std::move(trace), cert};
}

}  // namespace fpif
