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

#include "fpif/hilbert.hpp"

#include <cmath>
#include <string>

#include "fpif/error.hpp"

namespace fpif {

namespace {

std::string dims(Index a, Index b) {
  return std::to_string(a) + " vs " + std::to_string(b);
}

// Euclidean matrix of a linear map: W_cod^{1/2} M W_dom^{-1/2}.
Matrix to_euclidean_matrix(const Space& dom, const Space& cod,
                           const Matrix& m) {
  if (dom.is_euclidean() && cod.is_euclidean()) return m;
  const Vector left = cod.weights().cwiseSqrt();
  const Vector right = dom.weights().cwiseSqrt().cwiseInverse();
  return left.asDiagonal() * m * right.asDiagonal();
}

Matrix from_euclidean_matrix(const Space& dom, const Space& cod,
                             const Matrix& m) {
  if (dom.is_euclidean() && cod.is_euclidean()) return m;
  const Vector left = cod.weights().cwiseSqrt().cwiseInverse();
  const Vector right = dom.weights().cwiseSqrt();
  return left.asDiagonal() * m * right.asDiagonal();
}

Matrix euclidean_pinv(const Matrix& m) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? kRankCutoff * sigma(0) : 0.0;
  Vector inv = Vector::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

Space::Space(Index dim) {
  if (dim < 1) throw DimensionError("space dimension must be >= 1");
  weights_ = std::make_shared<const Vector>(Vector::Ones(dim));
  euclidean_ = true;
}

Space::Space(Vector weights) {
  if (weights.size() < 1) throw DimensionError("space dimension must be >= 1");
  for (Index i = 0; i < weights.size(); ++i) {
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
      throw DimensionError("space weights must be finite and > 0");
    }
  }
  euclidean_ = (weights.array() == 1.0).all();
  weights_ = std::make_shared<const Vector>(std::move(weights));
}

double Space::inner(const Vector& x, const Vector& y) const {
  if (euclidean_) return x.dot(y);
  return (weights_->array() * (x.array() * y.array())).sum();
}

double Space::squared_norm(const Vector& x) const {
  if (euclidean_) return x.squaredNorm();
  return (weights_->array() * x.array().square()).sum();
}

double Space::norm(const Vector& x) const { return std::sqrt(squared_norm(x)); }

Vector Space::to_euclidean(const Vector& x) const {
  if (euclidean_) return x;
  return weights_->cwiseSqrt().cwiseProduct(x);
}

Vector Space::from_euclidean(const Vector& x) const {
  if (euclidean_) return x;
  return x.cwiseQuotient(weights_->cwiseSqrt());
}

bool Space::operator==(const Space& other) const {
  if (weights_ == other.weights_) return true;
  if (dim() != other.dim()) return false;
  return *weights_ == *other.weights_;
}

void check_point(const Space& space, const Vector& x, const char* what) {
  if (x.size() != space.dim()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         dims(x.size(), space.dim()) + ")");
  }
  if (!x.allFinite()) {
    throw DimensionError(std::string(what) + ": non-finite coordinate");
  }
}

Point::Point(Space s, Vector c) : space(std::move(s)), coords(std::move(c)) {
  check_point(space, coords, "point");
}

// ---------------------------------------------------------------------------
// LinearMap

LinearMap::LinearMap(Space domain, Space codomain, Matrix matrix)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim()) {
    throw DimensionError("linear map: matrix is " +
                         std::to_string(matrix_.rows()) + "x" +
                         std::to_string(matrix_.cols()) + ", expected " +
                         std::to_string(codomain_.dim()) + "x" +
                         std::to_string(domain_.dim()));
  }
  if (!matrix_.allFinite()) {
    throw DimensionError("linear map: non-finite entry");
  }
}

LinearMap::LinearMap(Matrix matrix)
    : LinearMap(Space(matrix.cols()), Space(matrix.rows()), matrix) {}

Vector LinearMap::apply(const Vector& x) const {
  if (x.size() != domain_.dim()) {
    throw DimensionError("linear map: input dimension " +
                         dims(x.size(), domain_.dim()));
  }
  return matrix_ * x;
}

LinearMap LinearMap::adjoint() const {
  Matrix adj = matrix_.transpose();
  if (!domain_.is_euclidean() || !codomain_.is_euclidean()) {
    adj = domain_.weights().cwiseInverse().asDiagonal() * adj *
          codomain_.weights().asDiagonal();
  }
  return LinearMap(codomain_, domain_, std::move(adj));
}

LinearMap LinearMap::compose(const LinearMap& inner) const {
  if (!(inner.codomain() == domain_)) {
    throw DimensionError("linear map composition: incompatible spaces");
  }
  return LinearMap(inner.domain(), codomain_, matrix_ * inner.matrix());
}

Matrix LinearMap::euclidean_matrix() const {
  return to_euclidean_matrix(domain_, codomain_, matrix_);
}

double LinearMap::norm() const {
  const Matrix m = euclidean_matrix();
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double LinearMap::norm_power(int iterations, double tol) const {
  // Power iteration on L*L in the domain metric.
  const LinearMap adj = adjoint();
  Vector v(domain_.dim());
  // Deterministic start that is generically not orthogonal to the top
  // singular vector.
  for (Index i = 0; i < v.size(); ++i) {
    v(i) = 1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i));
  }
  double nv = domain_.norm(v);
  if (nv == 0.0) return 0.0;
  v /= nv;
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = adj.apply(apply(v));
    const double nw = domain_.norm(w);
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - estimate) <= tol * std::max(1.0, next)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

LinearMap pseudoinverse(const LinearMap& map) {
  const Matrix pinv = euclidean_pinv(map.euclidean_matrix());
  // pinv maps Euclidean(codomain) -> Euclidean(domain).
  return LinearMap(map.codomain(), map.domain(),
                   from_euclidean_matrix(map.codomain(), map.domain(), pinv));
}

// ---------------------------------------------------------------------------
// Projector

Projector::Kind Projector::classify(const Matrix& matrix) {
  if (matrix.isZero(0.0)) return Kind::kZero;
  if (matrix.isIdentity(0.0)) return Kind::kIdentity;
  return Kind::kGeneral;
}

Projector::Projector(Space space, Matrix matrix, Kind kind)
    : space_(std::move(space)), matrix_(std::move(matrix)), kind_(kind) {}

Projector::Projector(Space space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const Index n = space_.dim();
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("projector: matrix must be " + std::to_string(n) +
                         "x" + std::to_string(n));
  }
  if (!matrix_.allFinite()) throw DimensionError("projector: non-finite entry");
  const double tol = 1e-10 * static_cast<double>(n);
  if ((matrix_ * matrix_ - matrix_).norm() > tol) {
    throw ConfigError("projector: matrix is not idempotent");
  }
  const Matrix e = to_euclidean_matrix(space_, space_, matrix_);
  if ((e - e.transpose()).norm() > tol) {
    throw ConfigError("projector: matrix is not self-adjoint in the metric");
  }
  kind_ = classify(matrix_);
}

Projector Projector::identity(const Space& space) {
  return Projector(space, Matrix::Identity(space.dim(), space.dim()),
                   Kind::kIdentity);
}

Projector Projector::zero(const Space& space) {
  return Projector(space, Matrix::Zero(space.dim(), space.dim()), Kind::kZero);
}

Vector Projector::apply(const Vector& x) const {
  if (x.size() != space_.dim()) {
    throw DimensionError("projector: input dimension " +
                         dims(x.size(), space_.dim()));
  }
  switch (kind_) {
    case Kind::kIdentity:
      return x;
    case Kind::kZero:
      return Vector::Zero(x.size());
    case Kind::kGeneral:
      break;
  }
  return matrix_ * x;
}

Vector Projector::apply_complement(const Vector& x) const {
  switch (kind_) {
    case Kind::kIdentity:
      return Vector::Zero(x.size());
    case Kind::kZero:
      return x;
    case Kind::kGeneral:
      break;
  }
  return x - apply(x);
}

Projector Projector::complement() const {
  Matrix c = Matrix::Identity(space_.dim(), space_.dim()) - matrix_;
  Kind kind = Kind::kGeneral;
  if (kind_ == Kind::kIdentity) kind = Kind::kZero;
  if (kind_ == Kind::kZero) kind = Kind::kIdentity;
  return Projector(space_, std::move(c), kind);
}

bool Projector::is_coordinate() const {
  for (Index i = 0; i < matrix_.rows(); ++i) {
    for (Index j = 0; j < matrix_.cols(); ++j) {
      const double v = matrix_(i, j);
      if (i == j ? (v != 0.0 && v != 1.0) : v != 0.0) return false;
    }
  }
  return true;
}

Index Projector::rank() const {
  return static_cast<Index>(std::llround(matrix_.trace()));
}

Point project(const Projector& projector, const Point& x) {
  if (!(x.space == projector.space())) {
    throw DimensionError("project: point and projector live in different spaces");
  }
  return Point(x.space, projector.apply(x.coords));
}

Projector projector_from_basis(const Space& space,
                               std::span<const Vector> basis) {
  if (basis.empty()) return Projector::zero(space);
  Matrix b(space.dim(), static_cast<Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    check_point(space, basis[k], "projector_from_basis");
    b.col(static_cast<Index>(k)) = basis[k];
  }
  const LinearMap embed(Space(b.cols()), space, b);
  const LinearMap range_proj = embed.compose(pseudoinverse(embed));
  const Index rank = static_cast<Index>(std::llround(range_proj.matrix().trace()));
  if (rank == 0) return Projector::zero(space);
  if (rank == space.dim()) return Projector::identity(space);
  Matrix m = range_proj.matrix();
  // Symmetrize in the metric to remove rounding asymmetry.
  Matrix e = to_euclidean_matrix(space, space, m);
  e = 0.5 * (e + e.transpose()).eval();
  return Projector(space, from_euclidean_matrix(space, space, e));
}

Projector projector_from_kernel(const LinearMap& map) {
  const LinearMap adj = map.adjoint();
  const LinearMap range_adj = adj.compose(pseudoinverse(adj));
  const Space& space = map.domain();
  const Index rank = static_cast<Index>(std::llround(range_adj.matrix().trace()));
  if (rank == 0) return Projector::identity(space);
  if (rank == space.dim()) return Projector::zero(space);
  Matrix e = to_euclidean_matrix(
      space, space,
      Matrix::Identity(space.dim(), space.dim()) - range_adj.matrix());
  e = 0.5 * (e + e.transpose()).eval();
  return Projector(space, from_euclidean_matrix(space, space, e));
}

Space product_space(std::span<const Space> factors) {
  Index n = 0;
  for (const Space& s : factors) n += s.dim();
  Vector w(n);
  Index offset = 0;
  for (const Space& s : factors) {
    w.segment(offset, s.dim()) = s.weights();
    offset += s.dim();
  }
  return Space(std::move(w));
}

Projector product_projector(std::span<const Projector> factors) {
  std::vector<Space> spaces;
  spaces.reserve(factors.size());
  for (const Projector& p : factors) spaces.push_back(p.space());
  const Space space = product_space(spaces);
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  Index offset = 0;
  for (const Projector& p : factors) {
    m.block(offset, offset, p.space().dim(), p.space().dim()) = p.matrix();
    offset += p.space().dim();
  }
  return Projector(space, std::move(m));
}

}  // namespace fpif
