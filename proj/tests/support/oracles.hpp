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

// Reference computations for tests. These deliberately avoid the library's
// own code paths: plain Euclidean matrices, QR solves, bisection.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fpif::testing {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Vec qr_solve(const Mat& a, const Vec& b) {
  return a.colPivHouseholderQr().solve(b);
}

// Euclidean orthogonal projector onto the column span of `basis`.
inline Mat span_projector(const Mat& basis) {
  if (basis.cols() == 0) return Mat::Zero(basis.rows(), basis.rows());
  Eigen::ColPivHouseholderQR<Mat> qr(basis);
  const Eigen::Index r = qr.rank();
  const Mat q = qr.householderQ() * Mat::Identity(basis.rows(), r);
  return q * q.transpose();
}

// Orthonormal basis of the range of a Euclidean projector.
inline Mat range_basis(const Mat& p) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (p + p.transpose()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  }
  Mat q(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    q.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  }
  return q;
}

// J_{gamma M} x = (I + gamma M)^{-1} x for a linear operator M.
inline Vec linear_resolvent(const Mat& m, double gamma, const Vec& x) {
  return qr_solve(Mat::Identity(m.rows(), m.cols()) + gamma * m, x);
}

// Matrix of the partial inverse D_W of an invertible-enough linear D with
// respect to the range of the Euclidean projector pw. Its graph is
// {(P a + P^perp D a, P D a + P^perp a)}.
inline Mat partial_inverse_matrix(const Mat& d, const Mat& pw) {
  const Mat id = Mat::Identity(d.rows(), d.cols());
  const Mat q = id - pw;
  const Mat in = pw + q * d;
  const Mat out = pw * d + q;
  return out * in.inverse();
}

// Root of a nondecreasing scalar function on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, int iterations = 200) {
  double flo = f(lo);
  if (flo > 0.0) throw std::invalid_argument("bisect: f(lo) > 0");
  if (f(hi) < 0.0) throw std::invalid_argument("bisect: f(hi) < 0");
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline Vec clamp(const Vec& x, const Vec& lo, const Vec& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace fpif::testing
