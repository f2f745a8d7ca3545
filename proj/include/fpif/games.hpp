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

// Two-player zero-sum games: player 1 minimizes f(x1, x2) over
// S1 = {x in C1 : L1 x = b1}, player 2 maximizes it over S2. The solver
// never projects onto S_i; it alternates P_{C_i} with K_i = L_i^* L_i^{*+},
// the projector onto (ker L_i)^perp, on the shifted variable z_i = x_i - e_i.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "fpif/hilbert.hpp"
#include "fpif/operators.hpp"
#include "fpif/solver_core.hpp"

namespace fpif {

struct Player {
  ResolventOp c;  // N_{C_i}; its resolvent is P_{C_i}
  LinearMap l;    // H_i -> G_i
  Vector e;       // L_i e_i = b_i
  Vector b;
  // K_i. When empty, built as L_i^* (L_i^*)^+ through the pseudoinverse.
  VectorMap range_projector;

  const Space& space() const { return c.space(); }
};

// (x1, x2) -> (grad_1 f, grad_2 f)
using GradientOracle =
    std::function<std::pair<Vector, Vector>(const Vector&, const Vector&)>;
using PayoffFunction = std::function<double(const Vector&, const Vector&)>;

struct SaddleProblem {
  Player p1;
  Player p2;
  GradientOracle grad;
  double chi;  // lipschitz constant of grad f
  PayoffFunction f;  // optional, for gradient checks

  // Dimensions, L_i e_i = b_i within 1e-10. Logs (does not enforce) whether
  // e_i is strictly inside C_i.
  void validate() const;
};

struct SaddleResult {
  Vector x1;  // P_V z1 + e1
  Vector x2;
  Vector z1;
  Vector z2;
  SolveTrace trace;  // snapshots hold (z1, z2)
};

// Empty z0 means zeros (start at e). gamma must lie in ]0, 1/chi[.
SaddleResult saddle_solve(const SaddleProblem& prob, double gamma,
                          const Vector& z10, const Vector& z20,
                          const Sequence& lambda, const StopRule& stop,
                          const SolveOptions& options = {});

struct SaddleResiduals {
  double fixed_point = 0.0;
  double relative = 0.0;
  double positivity1 = 0.0;  // |x1 - P_{C1} x1|
  double positivity2 = 0.0;
  double affine1 = 0.0;      // |L1 x1 - b1|
  double affine2 = 0.0;
};
SaddleResiduals saddle_residuals(const SaddleProblem& prob, double gamma,
                                 const Vector& z1, const Vector& z2);

// Max relative error between central differences of f and the oracle over
// random points. Throws ConfigError when f is absent.
double gradient_check(const SaddleProblem& prob, int n_points, double radius,
                      std::uint64_t seed);

// Row player minimizes x1^T F x2.
struct MatrixGame {
  Matrix payoff;
};

SaddleProblem matrix_game_problem(const MatrixGame& game);

struct GameResult {
  Vector x1;
  Vector x2;
  double value = 0.0;
  double gap = 0.0;
  double gamma = 0.0;
  SaddleResult run;
};

// gamma defaults to 0.9 / |F| (1 when F = 0).
GameResult matrix_game_solve(const MatrixGame& game,
                             std::optional<double> gamma, const StopRule& stop,
                             const Sequence& lambda = Sequence::constant(1.0),
                             const SolveOptions& options = {});

// max_j (F^T x1)_j - min_i (F x2)_i. Inputs off the simplex (tolerance
// 1e-9) are projected onto it with a warning.
double duality_gap(const MatrixGame& game, const Vector& x1, const Vector& x2);

// Euclidean projection onto the unit simplex.
Vector project_simplex(const Vector& v);

enum class GridRule { kTrapezoid, kMidpoint };

struct Grid {
  Vector nodes;
  Vector weights;  // quadrature weights, all > 0
  double mass() const { return weights.sum(); }
};

Grid make_grid(double lower, double upper, Index points, GridRule rule);

// Kernel F sampled on grid1 x grid2.
struct GridGame {
  Grid grid1;
  Grid grid2;
  Matrix kernel;
};

GridGame grid_game_from_function(Grid grid1, Grid grid2,
                                 const std::function<double(double, double)>& f);
// sqrt(sum_ij w1_i w2_j F_ij^2)
double grid_game_chi(const GridGame& game);
SaddleProblem grid_game_problem(const GridGame& game);
// The finite game played by the masses w_i g_i: payoff F_ij.
MatrixGame grid_game_matrix(const GridGame& game);

// Densities (w.r.t. the quadrature weights); value and gap are those of the
// induced matrix game at the masses.
GameResult grid_game_solve(const GridGame& game, std::optional<double> gamma,
                           const StopRule& stop,
                           const Sequence& lambda = Sequence::constant(1.0),
                           const SolveOptions& options = {});

}  // namespace fpif
