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

// Primal-dual splitting for
//
//   z in A x + N_U x + sum_i L_i^* P_{V_i} (B_i [+]_{V_i^perp} D_i + N_{V_i})
//        P_{V_i} (L_i x - b_i) + C x
//
// together with its dual, where [+]_W is the partial sum. The solver only
// needs J_{gamma (B_i)_{V_i^perp}} and the single-valued (D_i)_{V_i^perp};
// both are stored per block in that already-inverted form.

#pragma once

#include <vector>

#include "fpif/hilbert.hpp"
#include "fpif/operators.hpp"
#include "fpif/solver_core.hpp"
#include "fpif/splitting.hpp"

namespace fpif {

struct PDBlock {
  // Resolvent family of (B_i)_{V_i^perp} on G_i.
  ResolventOp b_partial;
  // (D_i)_{V_i^perp}, lipschitzian with constant nu_i = chi().
  LipschitzMap d_partial;
  LinearMap l;  // H -> G_i
  Projector v;  // V_i
  Vector b;     // b_i
};

// Builds a block from B_i itself: b_partial = partial_inverse(B_i, V_i^perp).
PDBlock pd_block(const ResolventOp& b_op, LipschitzMap d_partial, LinearMap l,
                 Projector v, Vector b);

struct PDProblem {
  ResolventOp a;
  Projector u;
  LipschitzMap c;
  Vector z;
  std::vector<PDBlock> blocks;

  void validate_structure() const;
  // max{mu, nu_i} + sqrt(sum |L_i|^2), with |L_i| from 50 power iterations
  // raised by 1%.
  double chi() const;
};

struct PDResult {
  Vector x;               // P_U x_bar
  std::vector<Vector> u;  // P_{V_i} u_bar_i
  Vector x_state;         // raw iterates
  std::vector<Vector> u_state;
  SolveTrace trace;  // snapshots hold (x, u_1, ..., u_m) flattened
};

// Empty u0 means zeros. gamma must lie in ]0, 1/chi[.
PDResult pd_solve(const PDProblem& prob, double gamma, const Vector& x0,
                  const std::vector<Vector>& u0, const Sequence& lambda,
                  const StopRule& stop, const SolveOptions& options = {});

// H x G_1 x ... x G_m.
Space pd_product_space(const PDProblem& prob);

// The same problem as one inclusion 0 in A w + (C + L) w + N_W w on the
// product space, with W = U x V_1 x ... x V_m and the skew coupling
// L(x, u) = (sum_i L_i^* P_{V_i} u_i, -P_{V_1} L_1 x, ..., -P_{V_m} L_m x).
InclusionProblem pd_product_inclusion(const PDProblem& prob, double gamma);
// The skew coupling map alone.
LinearMap pd_coupling(const PDProblem& prob);

struct PDResiduals {
  double fixed_point = 0.0;  // product norm of t - r
  double relative = 0.0;
  // Inclusion residual of the product problem at the current point (zero
  // exactly at a primal-dual solution).
  double kkt = 0.0;
  std::vector<double> dual;  // |t_{2,i} - r_{2,i}|
};
PDResiduals pd_residuals(const PDProblem& prob, double gamma, const Vector& x,
                         const std::vector<Vector>& u);

// U = H, V_i = G_i, lambda = 1: runs pd_solve and the projector-free
// recursion side by side; returns the max iterate deviation.
double pd_reduction_check(const PDProblem& prob, double gamma, const Vector& x0,
                          const std::vector<Vector>& u0, long iterations);

struct PDTwoOpResult {
  Vector x;
  Vector u1;
  Vector u2;
  SolveTrace trace;
  // max(|p1 + p2|, |u1 - p1| / gamma, |u2 - p2| / gamma) at the last state;
  // with p_i in B_i((u_i + gamma x - p_i) / gamma) this certifies 0 in
  // B1 x + B2 x.
  double certificate = 0.0;
};

// 0 in B1 x + B2 x through
//   p_i = J_{gamma B_i^{-1}}(u_i + gamma x)
//   x+ = x - gamma lambda (p1 + p2)
//   u_i+ = (1 - lambda) u_i + lambda (p_i - gamma^2 (u1 + u2)).
// gamma must lie in ]0, 1/sqrt(2)[.
PDTwoOpResult pd_two_op_special(const ResolventOp& b1, const ResolventOp& b2,
                                const Vector& x0, const Vector& u10,
                                const Vector& u20, double gamma,
                                const Sequence& lambda, const StopRule& stop,
                                const SolveOptions& options = {});

}  // namespace fpif
