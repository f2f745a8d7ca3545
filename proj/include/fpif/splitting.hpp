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

// Forward-partial-inverse-forward splitting for
//
//   find x in V with 0 in A x + B x + N_V x.
//
// With constant step delta = 1 the iteration is the forward-Douglas-Rachford-
// forward scheme
//
//   r = z - gamma P B P z
//   p = J_{gamma A} r
//   s = 2 P p - p + r - P r
//   t = s - gamma P B P s
//   z+ = z + lambda (t - r),
//
// read out as x = P z, y = P^perp z / gamma. Variable delta_n is available for
// affine A only.

#pragma once

#include "fpif/hilbert.hpp"
#include "fpif/operators.hpp"
#include "fpif/solver_core.hpp"

namespace fpif {

struct InclusionProblem {
  ResolventOp a;
  LipschitzMap b;
  Projector v;
  double gamma;

  // Shared space, gamma in ]0, 1/chi[ (any gamma > 0 when chi = 0).
  void validate() const;
};

// 0.9 / chi, or 1 when chi = 0.
double default_gamma(double chi);

struct PrimalDualPoint {
  Vector x;  // in V
  Vector y;  // in V^perp
};

struct FpifResult {
  PrimalDualPoint point;
  Vector z;  // x + gamma y, the iterated variable
  SolveTrace trace;
};

// x0 and y0 are projected onto V and V^perp (with a warning) when needed.
FpifResult fpif_solve(const InclusionProblem& prob, const Vector& x0,
                      const Vector& y0, const StepSchedule& schedule,
                      const StopRule& stop, const SolveOptions& options = {});

// One delta = 1 step at z.
struct FpifStep {
  Vector r;
  Vector p;
  Vector s;
  Vector t;
};
FpifStep fpif_step(const InclusionProblem& prob, const VectorMap& resolvent,
                   const Vector& z);

// Residuals of a candidate state z, without iterating.
struct FpifResiduals {
  double fixed_point = 0.0;     // |t - r| at z
  double relative = 0.0;        // fixed_point / max(1, |z|)
  double x_confinement = 0.0;   // |P^perp x|
  double y_confinement = 0.0;   // |P y|
  // |x - J_{gamma A}(x + gamma (y - P B x))|: zero iff y - P B x in A x.
  double inclusion = 0.0;
};
FpifResiduals fpif_residuals(const InclusionProblem& prob, const Vector& z);

// V = H and lambda = 1: runs fpif_solve and tseng_solve with delta = gamma
// side by side for `iterations` steps; returns max_n |z_n^fpif - z_n^tseng|.
double reduce_to_tseng_check(const InclusionProblem& prob, const Vector& z0,
                             long iterations);

// B = 0: compares with s = (z + R_{N_V} R_{gamma A} z) / 2,
// z+ = z + lambda (s - z). Returns the max iterate deviation.
double reduce_to_dr_check(const InclusionProblem& prob, const Vector& z0,
                          const Sequence& lambda, long iterations);

}  // namespace fpif
