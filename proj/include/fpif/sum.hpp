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

// 0 in sum_i A_i x + B x, solved on the product space H^m with the weighted
// metric sum_i w_i <x_i, y_i> and the diagonal subspace. Per iteration:
//
//   x = sum_j w_j z_j
//   r_i = z_i - gamma B x,       p_i = J_{gamma A_i / w_i} r_i
//   q = sum_j w_j p_j
//   s_i = 2 q - p_i + z_i - x,   t_i = s_i - gamma B q
//   z_i+ = z_i + lambda (t_i - r_i)
//
// The m copies are kept as separate vectors.

#pragma once

#include <vector>

#include "fpif/hilbert.hpp"
#include "fpif/operators.hpp"
#include "fpif/solver_core.hpp"

namespace fpif {

struct SumProblem {
  std::vector<ResolventOp> ops;
  LipschitzMap b;
  std::vector<double> weights;  // empty means uniform
  double gamma;

  std::size_t m() const { return ops.size(); }
  // Weights in use (uniform when none were given).
  std::vector<double> resolved_weights() const;
  // m >= 1, shared space, weights positive and summing to 1 within 1e-12,
  // gamma in ]0, 1/chi[.
  void validate() const;
};

// H^m with metric weights w_i on each block.
Space sum_product_space(const SumProblem& prob);
// P_V on the product space: (x_i) -> (sum_j w_j x_j, ..., sum_j w_j x_j).
Projector sum_diagonal_projector(const SumProblem& prob);

// sum_j w_j v_j, coordinate by coordinate with the terms in sorted order so
// that the result does not depend on the order of the blocks.
Vector weighted_mean(const std::vector<double>& weights,
                     const std::vector<Vector>& v);

Vector flatten(const std::vector<Vector>& blocks);
std::vector<Vector> unflatten(const Vector& flat, std::size_t m, Index dim);

struct SumResult {
  Vector x;
  std::vector<Vector> z;
  SolveTrace trace;  // snapshots hold the flattened z
};

// Empty z0 means all zeros.
SumResult sum_solve(const SumProblem& prob, const std::vector<Vector>& z0,
                    const Sequence& lambda, const StopRule& stop,
                    const SolveOptions& options = {});

struct SumResiduals {
  double fixed_point = 0.0;  // max_i |t_i - r_i|
  double relative = 0.0;
  // |sum_i y_i + B q| with y_i = w_i (r_i - p_i) / gamma in A_i p_i.
  double certificate = 0.0;
  double consensus = 0.0;    // max_i |p_i - q|
};
SumResiduals sum_residuals(const SumProblem& prob, const std::vector<Vector>& z);

// Two-operator parallel method (m = 2, B = 0, equal weights):
//   x = (z1 + z2) / 2, p1 = J_{2 gamma A1} z1, p2 = J_{2 gamma A2} z2,
//   z1+ = z1 + lambda (p2 - x), z2+ = z2 + lambda (p1 - x).
SumResult two_op_parallel_solve(const ResolventOp& a1, const ResolventOp& a2,
                                const Vector& z10, const Vector& z20,
                                double gamma, const Sequence& lambda,
                                const StopRule& stop,
                                const SolveOptions& options = {});

}  // namespace fpif
