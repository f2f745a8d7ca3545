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

// Standard operators with explicit resolvents.

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpif/error.hpp"
#include "fpif/operators.hpp"

namespace fpif {

namespace {

// Builds a ResolventOp from a scalar resolvent applied coordinate-wise.
ResolventOp separable_op(const Space& space, ResolventOp::ScalarResolvent scalar,
                         std::string name, ResolventOp::Traits traits = {}) {
  traits.separable = scalar;
  auto binder = [scalar, n = space.dim()](double gamma) -> VectorMap {
    return [scalar, gamma, n](const Vector& x) {
      Vector out(n);
      for (Index i = 0; i < n; ++i) out(i) = scalar(i, gamma, x(i));
      return out;
    };
  };
  return ResolventOp(space, std::move(binder), std::move(name),
                     std::move(traits));
}

void check_monotone_matrix(const Space& space, const Matrix& matrix,
                           const char* what) {
  const LinearMap map(space, space, matrix);
  const Matrix e = map.euclidean_matrix();
  const Matrix sym = 0.5 * (e + e.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw ConfigError(std::string(what) +
                      ": matrix is not monotone (symmetric part has a "
                      "negative eigenvalue " +
                      std::to_string(eig.eigenvalues().minCoeff()) + ")");
  }
}

bool is_diagonal(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

namespace catalog {

ResolventOp zero(const Space& space) {
  ResolventOp::Traits traits;
  traits.is_zero = true;
  const Index n = space.dim();
  traits.affine = AffineData{Matrix::Zero(n, n), Vector::Zero(n)};
  return separable_op(
      space, [](Index, double, double x) { return x; }, "zero",
      std::move(traits));
}

ResolventOp box(const Space& space, Vector lower, Vector upper) {
  if (lower.size() != space.dim() || upper.size() != space.dim()) {
    throw DimensionError("box: bounds must match the space dimension");
  }
  for (Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower(i)) || std::isnan(upper(i)) || lower(i) > upper(i)) {
      throw ConfigError("box: lower bound exceeds upper bound at index " +
                        std::to_string(i));
    }
  }
  return separable_op(
      space,
      [lower = std::move(lower), upper = std::move(upper)](Index i, double,
                                                           double x) {
        return std::clamp(x, lower(i), upper(i));
      },
      "box");
}

ResolventOp nonnegative_orthant(const Space& space) {
  const Index n = space.dim();
  return box(space, Vector::Zero(n),
             Vector::Constant(n, std::numeric_limits<double>::infinity()));
}

ResolventOp point(const Space& space, Vector c) {
  check_point(space, c, "point operator");
  ResolventOp::Traits traits;
  traits.inverse_is_zero = c.isZero(0.0);
  return separable_op(
      space, [c = std::move(c)](Index i, double, double) { return c(i); },
      "point", std::move(traits));
}

ResolventOp halfspace(const Space& space, Vector a, double b) {
  check_point(space, a, "halfspace normal");
  const double na2 = space.squared_norm(a);
  if (na2 == 0.0) throw ConfigError("halfspace: normal vector is zero");
  auto binder = [space, a = std::move(a), b, na2](double) -> VectorMap {
    return [space, a, b, na2](const Vector& x) {
      const double excess = space.inner(a, x) - b;
      if (excess <= 0.0) return x;
      return Vector(x - (excess / na2) * a);
    };
  };
  return ResolventOp(space, std::move(binder), "halfspace");
}

ResolventOp affine_set(const LinearMap& map, Vector rhs) {
  check_point(map.codomain(), rhs, "affine_set rhs");
  const LinearMap pinv = pseudoinverse(map);
  auto binder = [map, pinv, rhs = std::move(rhs)](double) -> VectorMap {
    return [map, pinv, rhs](const Vector& x) {
      return Vector(x - pinv.apply(map.apply(x) - rhs));
    };
  };
  return ResolventOp(map.domain(), std::move(binder), "affine_set");
}

ResolventOp l1(const Space& space, double scale) {
  if (!(scale >= 0.0)) throw ConfigError("l1: scale must be >= 0");
  return separable_op(
      space,
      [scale](Index, double gamma, double x) {
        const double t = gamma * scale;
        if (x > t) return x - t;
        if (x < -t) return x + t;
        return 0.0;
      },
      "l1");
}

ResolventOp affine(const Space& space, Matrix matrix, Vector offset) {
  const LinearMap map(space, space, matrix);
  check_point(space, offset, "affine operator offset");
  check_monotone_matrix(space, matrix, "affine operator");
  const Index n = space.dim();
  ResolventOp::Traits traits;
  traits.is_zero = matrix.isZero(0.0) && offset.isZero(0.0);
  traits.affine = AffineData{matrix, offset};
  if (is_diagonal(matrix)) {
    Vector diag = matrix.diagonal();
    traits.separable = [diag, offset](Index i, double gamma, double x) {
      return (x - gamma * offset(i)) / (1.0 + gamma * diag(i));
    };
  }
  auto binder = [matrix = std::move(matrix), offset = std::move(offset),
                 n](double gamma) -> VectorMap {
    auto lu = std::make_shared<const Eigen::PartialPivLU<Matrix>>(
        Matrix::Identity(n, n) + gamma * matrix);
    Vector shift = gamma * offset;
    return [lu, shift](const Vector& x) { return Vector(lu->solve(x - shift)); };
  };
  return ResolventOp(space, std::move(binder), "affine", std::move(traits));
}

ResolventOp linear(const Space& space, Matrix matrix) {
  const Index n = space.dim();
  return affine(space, std::move(matrix), Vector::Zero(n));
}

ResolventOp scaled_identity(const Space& space, double c) {
  if (!(c >= 0.0)) throw ConfigError("scaled_identity: coefficient must be >= 0");
  const Index n = space.dim();
  return affine(space, c * Matrix::Identity(n, n), Vector::Zero(n));
}

ResolventOp shifted(const ResolventOp& op, Vector shift) {
  check_point(op.space(), shift, "shifted operator");
  ResolventOp::Traits traits;
  traits.is_zero = op.traits().is_zero;
  if (op.traits().affine) {
    const AffineData& a = *op.traits().affine;
    traits.affine = AffineData{a.matrix, a.offset - a.matrix * shift};
  }
  if (op.traits().separable) {
    traits.separable = [scalar = op.traits().separable, shift](
                           Index i, double gamma, double x) {
      return shift(i) + scalar(i, gamma, x - shift(i));
    };
  }
  auto binder = [op, shift](double gamma) -> VectorMap {
    VectorMap j = op.bind(gamma);
    return [j, shift](const Vector& x) { return Vector(shift + j(x - shift)); };
  };
  return ResolventOp(op.space(), std::move(binder), "shifted(" + op.name() + ")",
                     std::move(traits));
}

ResolventOp plus_identity(const ResolventOp& op, double alpha) {
  if (!(alpha >= 0.0)) throw ConfigError("plus_identity: alpha must be >= 0");
  ResolventOp::Traits traits;
  const Index n = op.space().dim();
  if (op.traits().affine) {
    const AffineData& a = *op.traits().affine;
    traits.affine =
        AffineData{a.matrix + alpha * Matrix::Identity(n, n), a.offset};
  }
  if (op.traits().separable) {
    traits.separable = [scalar = op.traits().separable, alpha](
                           Index i, double gamma, double x) {
      const double s = 1.0 + gamma * alpha;
      return scalar(i, gamma / s, x / s);
    };
  }
  auto binder = [op, alpha](double gamma) -> VectorMap {
    const double s = 1.0 + gamma * alpha;
    VectorMap j = op.bind(gamma / s);
    return [j, s](const Vector& x) { return j(x / s); };
  };
  return ResolventOp(op.space(), std::move(binder),
                     "plus_identity(" + op.name() + ")", std::move(traits));
}

ResolventOp scaled(const ResolventOp& op, double s) {
  if (!(s > 0.0)) throw ConfigError("scaled: factor must be > 0");
  ResolventOp::Traits traits;
  traits.is_zero = op.traits().is_zero;
  traits.inverse_is_zero = op.traits().inverse_is_zero;
  if (op.traits().affine) {
    const AffineData& a = *op.traits().affine;
    traits.affine = AffineData{s * a.matrix, s * a.offset};
  }
  if (op.traits().separable) {
    traits.separable = [scalar = op.traits().separable, s](Index i, double gamma,
                                                           double x) {
      return scalar(i, gamma * s, x);
    };
  }
  auto binder = [op, s](double gamma) { return op.bind(gamma * s); };
  return ResolventOp(op.space(), std::move(binder), "scaled(" + op.name() + ")",
                     std::move(traits));
}

ResolventOp inverse(const ResolventOp& op) {
  // J_{gamma A^{-1}} x = x - gamma J_{A / gamma}(x / gamma)
  ResolventOp::Traits traits;
  traits.is_zero = op.traits().inverse_is_zero;
  traits.inverse_is_zero = op.traits().is_zero;
  if (op.traits().affine) {
    const AffineData& a = *op.traits().affine;
    Eigen::FullPivLU<Matrix> lu(a.matrix);
    if (lu.isInvertible()) {
      const Matrix inv = lu.inverse();
      traits.affine = AffineData{inv, -(inv * a.offset)};
    }
  }
  if (op.traits().separable) {
    traits.separable = [scalar = op.traits().separable](Index i, double gamma,
                                                        double x) {
      return x - gamma * scalar(i, 1.0 / gamma, x / gamma);
    };
  }
  auto binder = [op](double gamma) -> VectorMap {
    VectorMap j = op.bind(1.0 / gamma);
    return [j, gamma](const Vector& x) {
      return Vector(x - gamma * j(x / gamma));
    };
  };
  return ResolventOp(op.space(), std::move(binder), "inverse(" + op.name() + ")",
                     std::move(traits));
}

}  // namespace catalog

namespace lipschitz {

LipschitzMap zero(const Space& space) {
  const Index n = space.dim();
  return LipschitzMap(
      space, [n](const Vector&) { return Vector(Vector::Zero(n)); }, 0.0, "zero",
      AffineData{Matrix::Zero(n, n), Vector::Zero(n)}, true);
}

LipschitzMap affine(const Space& space, Matrix matrix, Vector offset) {
  const LinearMap map(space, space, matrix);
  check_point(space, offset, "affine map offset");
  check_monotone_matrix(space, matrix, "affine map");
  const double chi = map.norm();
  const bool is_zero = matrix.isZero(0.0) && offset.isZero(0.0);
  AffineData data{matrix, offset};
  auto eval = [matrix = std::move(matrix), offset = std::move(offset)](
                  const Vector& x) { return Vector(matrix * x + offset); };
  return LipschitzMap(space, std::move(eval), chi, "affine", std::move(data),
                      is_zero);
}

LipschitzMap linear(const Space& space, Matrix matrix) {
  const Index n = space.dim();
  return affine(space, std::move(matrix), Vector::Zero(n));
}

LipschitzMap from_function(const Space& space, VectorMap eval, double chi,
                           std::string name) {
  return LipschitzMap(space, std::move(eval), chi, std::move(name));
}

}  // namespace lipschitz

}  // namespace fpif
