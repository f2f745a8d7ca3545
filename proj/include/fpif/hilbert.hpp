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

// Finite-dimensional real Hilbert spaces with a diagonal metric, orthogonal
// projectors onto subspaces, and linear maps between such spaces.
//
// All types here are immutable values. A Space shares its weight vector, so
// copies are cheap and spaces can be compared for identity of metric.

#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace fpif {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Singular values at or below kRankCutoff * sigma_max count as zero.
inline constexpr double kRankCutoff = 1e-12;

class Space {
 public:
  // Standard Euclidean R^dim.
  explicit Space(Index dim);
  // Diagonal metric <x, y> = sum_i w_i x_i y_i. Every weight must be > 0.
  explicit Space(Vector weights);

  Index dim() const { return weights_->size(); }
  const Vector& weights() const { return *weights_; }
  bool is_euclidean() const { return euclidean_; }

  double inner(const Vector& x, const Vector& y) const;
  double norm(const Vector& x) const;
  double squared_norm(const Vector& x) const;

  // Coordinates of the isometry onto standard R^dim: x -> W^{1/2} x.
  Vector to_euclidean(const Vector& x) const;
  Vector from_euclidean(const Vector& x) const;

  // Same dimension and same metric.
  bool operator==(const Space& other) const;

 private:
  std::shared_ptr<const Vector> weights_;
  bool euclidean_ = true;
};

// Throws DimensionError unless x has space.dim() finite coordinates.
void check_point(const Space& space, const Vector& x, const char* what);

// A checked element of a Space.
struct Point {
  Point(Space s, Vector c);

  Space space;
  Vector coords;
};

// Linear map between two weighted spaces, stored as a dense matrix in
// coordinates (codomain.dim() x domain.dim()).
class LinearMap {
 public:
  LinearMap(Space domain, Space codomain, Matrix matrix);
  // Convenience: Euclidean domain and codomain sized from the matrix.
  explicit LinearMap(Matrix matrix);

  const Space& domain() const { return domain_; }
  const Space& codomain() const { return codomain_; }
  const Matrix& matrix() const { return matrix_; }

  Vector apply(const Vector& x) const;
  // Adjoint with respect to the two metrics: W_dom^{-1} M^T W_cod.
  LinearMap adjoint() const;
  // this o inner
  LinearMap compose(const LinearMap& inner) const;
  // Operator norm in the metrics (largest singular value of the map
  // expressed in orthonormal coordinates).
  double norm() const;
  // Power iteration on L*L; returns the estimate only (no safety margin).
  double norm_power(int iterations = 50, double tol = 1e-10) const;
  // Matrix of the same map in Euclidean coordinates on both sides.
  Matrix euclidean_matrix() const;

 private:
  Space domain_;
  Space codomain_;
  Matrix matrix_;
};

// Moore-Penrose pseudoinverse with respect to the spaces' metrics, via a
// singular value decomposition with the kRankCutoff threshold.
LinearMap pseudoinverse(const LinearMap& map);

// Orthogonal projector P_V onto a closed subspace V of a Space.
class Projector {
 public:
  // Validates idempotence and self-adjointness in the metric.
  Projector(Space space, Matrix matrix);

  static Projector identity(const Space& space);
  static Projector zero(const Space& space);

  const Space& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }

  Vector apply(const Vector& x) const;
  // (Id - P) x
  Vector apply_complement(const Vector& x) const;
  // Projector onto the orthogonal complement; the matrix is exactly Id - P.
  Projector complement() const;

  // Exact identity / zero matrix (as produced by identity() and zero(), or by
  // a basis that spans everything).
  bool is_identity() const { return kind_ == Kind::kIdentity; }
  bool is_zero() const { return kind_ == Kind::kZero; }
  // Diagonal 0/1 matrix: the subspace is spanned by coordinate vectors.
  bool is_coordinate() const;
  // Numerical rank (trace of P rounded).
  Index rank() const;

 private:
  enum class Kind { kGeneral, kIdentity, kZero };
  Projector(Space space, Matrix matrix, Kind kind);
  static Kind classify(const Matrix& matrix);

  Space space_;
  Matrix matrix_;
  Kind kind_ = Kind::kGeneral;
};

Point project(const Projector& projector, const Point& x);

// Projector onto span(basis). An empty basis gives the zero projector;
// rank-deficient bases are accepted.
Projector projector_from_basis(const Space& space,
                               std::span<const Vector> basis);
// Projector onto ker L, computed as Id - L* (L*)^+.
Projector projector_from_kernel(const LinearMap& map);

// Block-diagonal product of spaces / projectors / maps.
Space product_space(std::span<const Space> factors);
Projector product_projector(std::span<const Projector> factors);

}  // namespace fpif
