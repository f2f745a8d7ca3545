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

#include "fpif/random.hpp"

#include <cmath>
#include <vector>

namespace fpif {

Vector random_gaussian(Rng& rng, Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Vector random_in_ball(Rng& rng, const Space& space, double radius) {
  Vector dir = random_gaussian(rng, space.dim());
  const double nd = dir.norm();
  if (nd == 0.0) return Vector::Zero(space.dim());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r =
      radius * std::pow(unif(rng), 1.0 / static_cast<double>(space.dim()));
  return space.from_euclidean(dir * (r / nd));
}

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

Matrix random_spd(Rng& rng, Index n, double min_eig, double spread) {
  const Matrix g = random_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector eig(n);
  for (Index i = 0; i < n; ++i) eig(i) = min_eig + spread * unif(rng);
  Matrix m = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

Matrix random_skew(Rng& rng, Index n) {
  const Matrix g = random_matrix(rng, n, n);
  return 0.5 * (g - g.transpose());
}

Matrix random_monotone(Rng& rng, Index n) {
  return random_spd(rng, n) + random_skew(rng, n);
}

Projector random_subspace(Rng& rng, const Space& space, Index k) {
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) basis.push_back(random_gaussian(rng, space.dim()));
  return projector_from_basis(space, basis);
}

}  // namespace fpif
