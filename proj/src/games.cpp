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

#include "fpif/games.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "fpif/error.hpp"
#include "fpif/log.hpp"
#include "fpif/random.hpp"
#include "fpif/sum.hpp"

namespace fpif {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

VectorMap range_projector_of(const Player& p) {
  if (p.range_projector) return p.range_projector;
  const LinearMap ls = p.l.adjoint();
  const LinearMap k = ls.compose(pseudoinverse(ls));
  return [k](const Vector& x) { return k.apply(x); };
}

struct Bound {
  VectorMap k1, k2;
  VectorMap pc1, pc2;
};

Bound bind(const SaddleProblem& prob) {
  return Bound{range_projector_of(prob.p1), range_projector_of(prob.p2),
               prob.p1.c.bind(1.0), prob.p2.c.bind(1.0)};
}

struct SaddleStep {
  Vector r1, r2, s1, s2, t1, t2;
};

// g = (grad_1 f - K1 grad_1 f, -grad_2 f + K2 grad_2 f) at (e + w).
std::pair<Vector, Vector> field(const SaddleProblem& prob, const Bound& bd,
                                const Vector& w1, const Vector& w2) {
  auto [d1, d2] = prob.grad(prob.p1.e + w1, prob.p2.e + w2);
  Vector g1 = d1 - bd.k1(d1);
  Vector g2 = -d2 + bd.k2(d2);
  return {std::move(g1), std::move(g2)};
}

SaddleStep saddle_step(const SaddleProblem& prob, const Bound& bd,
                       double gamma, const Vector& z1, const Vector& z2) {
  const Vector u1 = z1 - bd.k1(z1);
  const Vector u2 = z2 - bd.k2(z2);
  const auto [g1, g2] = field(prob, bd, u1, u2);
  SaddleStep st;
  st.r1 = z1 - gamma * g1;
  st.r2 = z2 - gamma * g2;
  const Vector p1 = bd.pc1(st.r1 + prob.p1.e) - prob.p1.e;
  const Vector p2 = bd.pc2(st.r2 + prob.p2.e) - prob.p2.e;
  const Vector v1 = p1 - bd.k1(p1);
  const Vector v2 = p2 - bd.k2(p2);
  st.s1 = 2.0 * v1 - p1 + bd.k1(st.r1);
  st.s2 = 2.0 * v2 - p2 + bd.k2(st.r2);
  const auto [h1, h2] = field(prob, bd, v1, v2);
  st.t1 = st.s1 - gamma * h1;
  st.t2 = st.s2 - gamma * h2;
  return st;
}

double product_norm(const Space& a, const Vector& x, const Space& b,
                    const Vector& y) {
  return std::sqrt(a.squared_norm(x) + b.squared_norm(y));
}

void check_gamma(double gamma, double chi) {
  if (!(gamma > 0.0) || !std::isfinite(gamma) ||
      (chi > 0.0 && !(gamma * chi < 1.0))) {
    throw ConfigError("gamma = " + num(gamma) +
                      " violates gamma in ]0, 1/chi[ with chi = " + num(chi));
  }
}

struct Feasibility {
  double pos1, pos2, aff1, aff2;
};

Feasibility feasibility(const SaddleProblem& prob, const Bound& bd,
                        const Vector& x1, const Vector& x2) {
  const Space& s1 = prob.p1.space();
  const Space& s2 = prob.p2.space();
  const Space& g1 = prob.p1.l.codomain();
  const Space& g2 = prob.p2.l.codomain();
  return Feasibility{s1.norm(x1 - bd.pc1(x1)), s2.norm(x2 - bd.pc2(x2)),
                     g1.norm(prob.p1.l.apply(x1) - prob.p1.b),
                     g2.norm(prob.p2.l.apply(x2) - prob.p2.b)};
}

double default_game_gamma(double chi) { return chi > 0.0 ? 0.9 / chi : 1.0; }

double gap_unchecked(const Matrix& f, const Vector& x1, const Vector& x2) {
  return (f.transpose() * x1).maxCoeff() - (f * x2).minCoeff();
}

bool on_simplex(const Vector& x) {
  return x.minCoeff() >= -1e-9 && std::abs(x.sum() - 1.0) <= 1e-9;
}

}  // namespace

void SaddleProblem::validate() const {
  const Player* players[2] = {&p1, &p2};
  for (int i = 0; i < 2; ++i) {
    const Player& p = *players[i];
    const std::string who = "player " + std::to_string(i + 1);
    if (!(p.l.domain() == p.space())) {
      throw DimensionError(who + ": L is not defined on the strategy space");
    }
    check_point(p.space(), p.e, "game shift e");
    check_point(p.l.codomain(), p.b, "game right-hand side b");
    const double miss = p.l.codomain().norm(p.l.apply(p.e) - p.b);
    if (miss > 1e-10) {
      throw ConfigError(who + ": L e - b has norm " + num(miss) +
                        ", expected L e = b");
    }
    const Vector pe = p.c.resolvent(1.0, p.e);
    if (p.space().norm(pe - p.e) > 0.0) {
      log::info(who + ": e lies outside C");
    }
  }
  if (!grad) throw ConfigError("game: no gradient oracle");
  if (!(chi >= 0.0) || !std::isfinite(chi)) {
    throw ConfigError("game: chi must be finite and >= 0");
  }
}

SaddleResult saddle_solve(const SaddleProblem& prob, double gamma,
                          const Vector& z10, const Vector& z20,
                          const Sequence& lambda, const StopRule& stop,
                          const SolveOptions& options) {
  prob.validate();
  check_gamma(gamma, prob.chi);
  const Space& s1 = prob.p1.space();
  const Space& s2 = prob.p2.space();
  Vector z1 = z10.size() == 0 ? Vector(Vector::Zero(s1.dim())) : z10;
  Vector z2 = z20.size() == 0 ? Vector(Vector::Zero(s2.dim())) : z20;
  check_point(s1, z1, "player 1 initial point");
  check_point(s2, z2, "player 2 initial point");
  StepSchedule sched;
  sched.lambda = lambda;
  sched.validate(gamma * prob.chi);
  stop.validate();

  const Bound bd = bind(prob);
  SolveTrace trace({"positivity1", "positivity2", "affine1", "affine2"});
  IterationRecorder recorder(trace, stop, options);
  recorder.start(flatten({z1, z2}));
  for (long n = 0;; ++n) {
    const double l = lambda(n);
    const SaddleStep st = saddle_step(prob, bd, gamma, z1, z2);
    const Vector d1 = st.t1 - st.r1;
    const Vector d2 = st.t2 - st.r2;
    Vector n1 = z1 + l * d1;
    Vector n2 = z2 + l * d2;
    const double residual = product_norm(s1, d1, s2, d2);
    const double step = product_norm(s1, n1 - z1, s2, n2 - z2);
    const double scale = std::max(1.0, product_norm(s1, z1, s2, z2));
    const Vector x1 = n1 - bd.k1(n1) + prob.p1.e;
    const Vector x2 = n2 - bd.k2(n2) + prob.p2.e;
    const Feasibility fe = feasibility(prob, bd, x1, x2);
    const Vector flat_next = flatten({n1, n2});
    if (options.observer) {
      const Vector fz = flatten({z1, z2});
      const Vector fr = flatten({st.r1, st.r2});
      const Vector fs = flatten({st.s1, st.s2});
      const Vector ft = flatten({st.t1, st.t2});
      options.observer(IterationView{n, fz, fr, fs, ft, flat_next, 1.0, l});
    }
    const bool done = recorder.record(n, residual, scale, 1.0, l, step,
                                      {fe.pos1, fe.pos2, fe.aff1, fe.aff2},
                                      flat_next);
    if (trace.status == SolveStatus::kDiverged) break;
    z1 = std::move(n1);
    z2 = std::move(n2);
    if (done) break;
  }
  Vector x1 = z1 - bd.k1(z1) + prob.p1.e;
  Vector x2 = z2 - bd.k2(z2) + prob.p2.e;
  return SaddleResult{std::move(x1), std::move(x2), std::move(z1),
                      std::move(z2), std::move(trace)};
}

SaddleResiduals saddle_residuals(const SaddleProblem& prob, double gamma,
                                 const Vector& z1, const Vector& z2) {
  prob.validate();
  check_gamma(gamma, prob.chi);
  const Space& s1 = prob.p1.space();
  const Space& s2 = prob.p2.space();
  check_point(s1, z1, "player 1 state");
  check_point(s2, z2, "player 2 state");
  const Bound bd = bind(prob);
  const SaddleStep st = saddle_step(prob, bd, gamma, z1, z2);
  SaddleResiduals res;
  res.fixed_point = product_norm(s1, st.t1 - st.r1, s2, st.t2 - st.r2);
  res.relative =
      res.fixed_point / std::max(1.0, product_norm(s1, z1, s2, z2));
  const Vector x1 = z1 - bd.k1(z1) + prob.p1.e;
  const Vector x2 = z2 - bd.k2(z2) + prob.p2.e;
  const Feasibility fe = feasibility(prob, bd, x1, x2);
  res.positivity1 = fe.pos1;
  res.positivity2 = fe.pos2;
  res.affine1 = fe.aff1;
  res.affine2 = fe.aff2;
  return res;
}

double gradient_check(const SaddleProblem& prob, int n_points, double radius,
                      std::uint64_t seed) {
  if (!prob.f) throw ConfigError("gradient check: no payoff function");
  Rng rng(seed);
  const Space& s1 = prob.p1.space();
  const Space& s2 = prob.p2.space();
  double worst = 0.0;
  const double h = 1e-6;
  for (int k = 0; k < n_points; ++k) {
    const Vector x1 = prob.p1.e + random_in_ball(rng, s1, radius);
    const Vector x2 = prob.p2.e + random_in_ball(rng, s2, radius);
    const auto [g1, g2] = prob.grad(x1, x2);
    // Directional derivatives along random directions compared with the
    // metric inner product against the oracle gradient.
    const Vector d1 = random_in_ball(rng, s1, 1.0);
    const Vector d2 = random_in_ball(rng, s2, 1.0);
    const double fd1 =
        (prob.f(x1 + h * d1, x2) - prob.f(x1 - h * d1, x2)) / (2.0 * h);
    const double fd2 =
        (prob.f(x1, x2 + h * d2) - prob.f(x1, x2 - h * d2)) / (2.0 * h);
    const double an1 = s1.inner(g1, d1);
    const double an2 = s2.inner(g2, d2);
    worst = std::max(worst, std::abs(fd1 - an1) / std::max(1.0, std::abs(an1)));
    worst = std::max(worst, std::abs(fd2 - an2) / std::max(1.0, std::abs(an2)));
  }
  return worst;
}

SaddleProblem matrix_game_problem(const MatrixGame& game) {
  const Matrix& f = game.payoff;
  if (f.rows() == 0 || f.cols() == 0) {
    throw DimensionError("matrix game: empty payoff matrix");
  }
  if (!f.allFinite()) throw ConfigError("matrix game: payoff is not finite");
  const Index n1 = f.rows();
  const Index n2 = f.cols();
  const Space h1(n1);
  const Space h2(n2);
  auto player = [](const Space& h) {
    const Index n = h.dim();
    return Player{catalog::nonnegative_orthant(h),
                  LinearMap(h, Space(1), Matrix::Ones(1, n)),
                  Vector::Constant(n, 1.0 / static_cast<double>(n)),
                  Vector::Ones(1), VectorMap{}};
  };
  // Explicit loops keep the two partial gradients in the same summation
  // order, so an antisymmetric F yields exactly mirrored fields.
  auto grad = [f](const Vector& x1, const Vector& x2) {
    Vector g1(f.rows());
    Vector g2(f.cols());
    for (Index i = 0; i < f.rows(); ++i) {
      double acc = 0.0;
      for (Index j = 0; j < f.cols(); ++j) acc += f(i, j) * x2(j);
      g1(i) = acc;
    }
    for (Index j = 0; j < f.cols(); ++j) {
      double acc = 0.0;
      for (Index i = 0; i < f.rows(); ++i) acc += f(i, j) * x1(i);
      g2(j) = acc;
    }
    return std::make_pair(std::move(g1), std::move(g2));
  };
  auto payoff = [f](const Vector& x1, const Vector& x2) {
    return x1.dot(f * x2);
  };
  const double chi = LinearMap(f).norm();
  return SaddleProblem{player(h1), player(h2), grad, chi, payoff};
}

GameResult matrix_game_solve(const MatrixGame& game,
                             std::optional<double> gamma, const StopRule& stop,
                             const Sequence& lambda,
                             const SolveOptions& options) {
  const SaddleProblem prob = matrix_game_problem(game);
  GameResult out;
  out.gamma = gamma.value_or(default_game_gamma(prob.chi));
  out.run = saddle_solve(prob, out.gamma, Vector(), Vector(), lambda, stop,
                         options);
  out.x1 = out.run.x1;
  out.x2 = out.run.x2;
  const Vector q1 = project_simplex(out.x1);
  const Vector q2 = project_simplex(out.x2);
  out.value = q1.dot(game.payoff * q2);
  out.gap = gap_unchecked(game.payoff, q1, q2);
  return out;
}

Vector project_simplex(const Vector& v) {
  const Index n = v.size();
  if (n == 0) throw DimensionError("simplex projection of an empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (Index k = 0; k < n; ++k) {
    cum += u[static_cast<std::size_t>(k)];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

double duality_gap(const MatrixGame& game, const Vector& x1,
                   const Vector& x2) {
  const Matrix& f = game.payoff;
  if (x1.size() != f.rows() || x2.size() != f.cols()) {
    throw DimensionError("duality gap: strategy sizes do not match F (" +
                         std::to_string(f.rows()) + "x" +
                         std::to_string(f.cols()) + ")");
  }
  Vector q1 = x1;
  Vector q2 = x2;
  if (!on_simplex(q1)) {
    log::warn("duality gap: row strategy is off the simplex; projecting");
    q1 = project_simplex(q1);
  }
  if (!on_simplex(q2)) {
    log::warn("duality gap: column strategy is off the simplex; projecting");
    q2 = project_simplex(q2);
  }
  return gap_unchecked(f, q1, q2);
}

Grid make_grid(double lower, double upper, Index points, GridRule rule) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(upper > lower)) {
    throw ConfigError("grid: need finite lower < upper, got [" + num(lower) +
                      ", " + num(upper) + "]");
  }
  Grid g;
  if (rule == GridRule::kTrapezoid) {
    if (points < 2) throw ConfigError("grid: trapezoid rule needs >= 2 points");
    const double h = (upper - lower) / static_cast<double>(points - 1);
    g.nodes = Vector::LinSpaced(points, lower, upper);
    g.weights = Vector::Constant(points, h);
    g.weights(0) = h / 2.0;
    g.weights(points - 1) = h / 2.0;
  } else {
    if (points < 1) throw ConfigError("grid: midpoint rule needs >= 1 point");
    const double h = (upper - lower) / static_cast<double>(points);
    g.nodes.resize(points);
    for (Index k = 0; k < points; ++k) {
      g.nodes(k) = lower + (static_cast<double>(k) + 0.5) * h;
    }
    g.weights = Vector::Constant(points, h);
  }
  return g;
}

GridGame grid_game_from_function(
    Grid grid1, Grid grid2, const std::function<double(double, double)>& f) {
  Matrix k(grid1.nodes.size(), grid2.nodes.size());
  for (Index i = 0; i < k.rows(); ++i) {
    for (Index j = 0; j < k.cols(); ++j) {
      k(i, j) = f(grid1.nodes(i), grid2.nodes(j));
    }
  }
  return GridGame{std::move(grid1), std::move(grid2), std::move(k)};
}

double grid_game_chi(const GridGame& game) {
  const Vector& w1 = game.grid1.weights;
  const Vector& w2 = game.grid2.weights;
  double acc = 0.0;
  for (Index i = 0; i < game.kernel.rows(); ++i) {
    for (Index j = 0; j < game.kernel.cols(); ++j) {
      acc += w1(i) * w2(j) * game.kernel(i, j) * game.kernel(i, j);
    }
  }
  return std::sqrt(acc);
}

SaddleProblem grid_game_problem(const GridGame& game) {
  const Vector& w1 = game.grid1.weights;
  const Vector& w2 = game.grid2.weights;
  const Matrix& k = game.kernel;
  if (k.rows() != w1.size() || k.cols() != w2.size()) {
    throw DimensionError("grid game: kernel is " + std::to_string(k.rows()) +
                         "x" + std::to_string(k.cols()) + ", grids have " +
                         std::to_string(w1.size()) + " and " +
                         std::to_string(w2.size()) + " nodes");
  }
  if (!k.allFinite()) throw ConfigError("grid game: kernel is not finite");
  auto player = [](const Vector& w) {
    const Space h(w);
    const double m = w.sum();
    // M_i: the weighted mean, a constant function.
    VectorMap mean = [w, m](const Vector& x) {
      return Vector(Vector::Constant(x.size(), w.dot(x) / m));
    };
    return Player{catalog::nonnegative_orthant(h),
                  LinearMap(h, Space(1), Matrix(w.transpose())),
                  Vector::Constant(w.size(), 1.0 / m), Vector::Ones(1),
                  std::move(mean)};
  };
  // Gradients in the L^2 metrics: (grad_1 f)(s) = int F(s, t) x2(t) dt.
  auto grad = [k, w1, w2](const Vector& x1, const Vector& x2) {
    Vector g1 = k * w2.cwiseProduct(x2);
    Vector g2 = k.transpose() * w1.cwiseProduct(x1);
    return std::make_pair(std::move(g1), std::move(g2));
  };
  auto payoff = [k, w1, w2](const Vector& x1, const Vector& x2) {
    return w1.cwiseProduct(x1).dot(k * w2.cwiseProduct(x2));
  };
  return SaddleProblem{player(w1), player(w2), grad, grid_game_chi(game),
                       payoff};
}

MatrixGame grid_game_matrix(const GridGame& game) {
  return MatrixGame{game.kernel};
}

GameResult grid_game_solve(const GridGame& game, std::optional<double> gamma,
                           const StopRule& stop, const Sequence& lambda,
                           const SolveOptions& options) {
  const SaddleProblem prob = grid_game_problem(game);
  GameResult out;
  out.gamma = gamma.value_or(default_game_gamma(prob.chi));
  out.run = saddle_solve(prob, out.gamma, Vector(), Vector(), lambda, stop,
                         options);
  out.x1 = out.run.x1;
  out.x2 = out.run.x2;
  const Vector q1 =
      project_simplex(game.grid1.weights.cwiseProduct(out.x1));
  const Vector q2 =
      project_simplex(game.grid2.weights.cwiseProduct(out.x2));
  out.value = q1.dot(game.kernel * q2);
  out.gap = gap_unchecked(game.kernel, q1, q2);
  return out;
}

}  // namespace fpif
