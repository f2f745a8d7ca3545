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

// Monotone operators.
//
// A set-valued maximally monotone operator A is represented only through its
// resolvent family gamma -> J_{gamma A} = (Id + gamma A)^{-1}; graphs are
// never materialized. Single-valued monotone lipschitzian operators carry a
// certified constant chi.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "fpif/hilbert.hpp"

namespace fpif {

// x -> M x + c
struct AffineData {
  Matrix matrix;
  Vector offset;
};

using VectorMap = std::function<Vector(const Vector&)>;

// Resolvent of the i-th scalar component of a separable operator.
using ScalarResolvent = std::function<double(Index i, double gamma, double x)>;

// Structure a solver may exploit instead of calling the resolvent.
struct ResolventTraits {
  std::optional<AffineData> affine;
  ScalarResolvent separable;
  bool is_zero = false;             // A = 0
  bool inverse_is_zero = false;     // graph {0} x H, i.e. A^{-1} = 0
};

class ResolventOp {
 public:
  // Returns J_{gamma A}, ready to be applied repeatedly with the same gamma.
  using Binder = std::function<VectorMap(double gamma)>;
  using ScalarResolvent = fpif::ScalarResolvent;
  using Traits = ResolventTraits;

  ResolventOp(Space space, Binder binder, std::string name, Traits traits = {});

  const Space& space() const { return impl_->space; }
  const std::string& name() const { return impl_->name; }
  const Traits& traits() const { return impl_->traits; }

  // J_{gamma A}; throws ConfigError for gamma <= 0.
  VectorMap bind(double gamma) const;
  Vector resolvent(double gamma, const Vector& x) const;

 private:
  struct Impl {
    Space space;
    Binder binder;
    std::string name;
    Traits traits;
  };
  std::shared_ptr<const Impl> impl_;
};

class LipschitzMap {
 public:
  LipschitzMap(Space space, VectorMap eval, double chi, std::string name,
               std::optional<AffineData> affine = std::nullopt,
               bool is_zero = false);

  const Space& space() const { return impl_->space; }
  double chi() const { return impl_->chi; }
  const std::string& name() const { return impl_->name; }
  const std::optional<AffineData>& affine() const { return impl_->affine; }
  bool is_zero() const { return impl_->is_zero; }

  Vector operator()(const Vector& x) const;

 private:
  struct Impl {
    Space space;
    VectorMap eval;
    double chi;
    std::string name;
    std::optional<AffineData> affine;
    bool is_zero;
  };
  std::shared_ptr<const Impl> impl_;
};

// R_{gamma A} x = 2 J_{gamma A} x - x
Vector reflect(const ResolventOp& op, double gamma, const Vector& x);

// The partial inverse (gamma A)_V, evaluated through its unit-step resolvent.
struct PartialInverseView {
  ResolventOp base;
  Projector projector;
  double gamma;
};

// J_{(gamma A)_V} x = (x + R_{N_V} R_{gamma A} x) / 2.
Vector partial_inverse_resolvent(const PartialInverseView& view,
                                 const Vector& x);

// Pair (p, q) with x = p + gamma q and
//   P q / delta + P^perp q = M (P p + P^perp p / delta) + c
// for an affine operator A = M . + c. This is the implicit step of the
// variable-step method; J_{delta (gamma A)_V} x = P p + gamma P^perp q.
std::pair<Vector, Vector> partial_inverse_pair(const AffineData& op,
                                               const Projector& projector,
                                               double gamma, double delta,
                                               const Vector& x);

// A_W as a ResolventOp: its resolvent at gamma is J_{gamma A_W}. Closed forms
// exist when W is everything or {0}, when A is affine, when A is separable
// and W is a coordinate subspace, and at gamma = 1. Any other gamma throws
// UnsupportedError when bound.
ResolventOp partial_inverse(const ResolventOp& op, const Projector& subspace);

// Resolvent of the partial sum A (+)_U B = (A_U + B_U)_U. Only the closed-form
// regimes are available: U = H (plain sum of a zero and any operator, or of
// two affine operators) and U = {0} (parallel sum when one inverse is the zero
// map, or both operators are invertible linear maps).
Vector partial_sum_resolvent(const ResolventOp& a, const ResolventOp& b,
                             const Projector& subspace, double gamma,
                             const Vector& x);

// Strong monotonicity (beta) and cocoercivity (nu) of a single-valued D.
struct MonotoneCertificate {
  double beta = 0.0;
  double nu = 0.0;
  // D_V is alpha-cocoercive and alpha-strongly monotone.
  double alpha() const { return 0.5 * std::min(beta, nu); }
};

MonotoneCertificate certify_strongly_monotone_cocoercive(double beta, double nu);
// D = grad f, f beta-strongly convex with gradient_lipschitz-lipschitz gradient.
MonotoneCertificate certify_gradient(double beta, double gradient_lipschitz);
// Linear D with <x, D x> >= beta |x|^2 and nu = beta / |D|^2.
MonotoneCertificate certify_coercive_linear(const Space& space,
                                            const Matrix& matrix);

// D_V(u) for single-valued D. One linear solve for affine D, otherwise a
// damped fixed-point iteration on the V^perp component (ConvergenceError
// after 10000 steps).
Vector partial_inverse_apply_singlevalued(const LipschitzMap& d,
                                          const MonotoneCertificate& cert,
                                          const Projector& projector,
                                          const Vector& u);
// D_V as a LipschitzMap with chi = 1 / alpha. Affine D gives an affine D_V.
LipschitzMap partial_inverse_map(const LipschitzMap& d,
                                 const MonotoneCertificate& cert,
                                 const Projector& projector);

// gamma P B P, monotone and gamma*chi-lipschitzian.
LipschitzMap transported(const LipschitzMap& b, const Projector& projector,
                         double gamma);

namespace catalog {

ResolventOp zero(const Space& space);
// N_C for the box [lower, upper] (entries may be infinite).
ResolventOp box(const Space& space, Vector lower, Vector upper);
ResolventOp nonnegative_orthant(const Space& space);
// N_{{c}}; its resolvent is the constant c.
ResolventOp point(const Space& space, Vector c);
// N_C for C = {x : <a, x> <= b}.
ResolventOp halfspace(const Space& space, Vector a, double b);
// N_C for C = {x : L x = rhs}.
ResolventOp affine_set(const LinearMap& map, Vector rhs);
// Subdifferential of x -> scale * sum_i w_i |x_i|.
ResolventOp l1(const Space& space, double scale);
// A x = M x + c; rejects M whose symmetric part (in the metric) has an
// eigenvalue below -1e-10.
ResolventOp affine(const Space& space, Matrix matrix, Vector offset);
ResolventOp linear(const Space& space, Matrix matrix);
ResolventOp scaled_identity(const Space& space, double c);
// x -> A(x - e)
ResolventOp shifted(const ResolventOp& op, Vector shift);
// A + alpha Id, alpha >= 0
ResolventOp plus_identity(const ResolventOp& op, double alpha);
// s A, s > 0
ResolventOp scaled(const ResolventOp& op, double s);
// A^{-1} via the Moreau decomposition.
ResolventOp inverse(const ResolventOp& op);

}  // namespace catalog

namespace lipschitz {

LipschitzMap zero(const Space& space);
// x -> M x + c, chi = |M| in the metric. Rejects non-monotone M.
LipschitzMap affine(const Space& space, Matrix matrix, Vector offset);
LipschitzMap linear(const Space& space, Matrix matrix);
// User-supplied map; monotonicity and chi are the caller's claim.
LipschitzMap from_function(const Space& space, VectorMap eval, double chi,
                           std::string name = "custom");

}  // namespace lipschitz

// Sampling probes over random pairs in a ball.
struct ProbeReport {
  double min_inner = 0.0;             // min <x-y, Tx-Ty>
  double max_ratio = 0.0;             // max |Tx-Ty| / |x-y|
  double min_strong_ratio = 0.0;      // min <x-y, Tx-Ty> / |x-y|^2
  double min_cocoercive_ratio = 0.0;  // min <x-y, Tx-Ty> / |Tx-Ty|^2
};

ProbeReport probe(const Space& space, const VectorMap& map, int n_samples,
                  double radius, std::uint64_t seed);
double probe_monotone(const Space& space, const VectorMap& map, int n_samples,
                      double radius, std::uint64_t seed);
double probe_lipschitz(const Space& space, const VectorMap& map, int n_samples,
                       double radius, std::uint64_t seed);
// max over pairs of |Jx-Jy|^2 - <x-y, Jx-Jy> (<= 0 for firmly nonexpansive J).
double probe_firm_nonexpansive(const Space& space, const VectorMap& map,
                               int n_samples, double radius,
                               std::uint64_t seed);

}  // namespace fpif
