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


#include <doctest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <vector>

#include "fpif/error.hpp"
#include "fpif/games.hpp"
#include "fpif/random.hpp"
#include "support/lp.hpp"

using namespace fpif;
using Rational = boost::multiprecision::cpp_rational;
using testing::Rows;

namespace {

Matrix rps() {
  Matrix f(3, 3);
  f << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  return f;
}

Matrix pennies() {
  Matrix f(2, 2);
  f << 1, -1, -1, 1;
  return f;
}

StopRule tight() {
  StopRule stop;
  stop.residual_tol = 1e-11;
  stop.iterate_tol = 1e-11;
  stop.max_iter = 500000;
  return stop;
}

Rows<double> rows_of(const Matrix& f) {
  Rows<double> out(static_cast<std::size_t>(f.rows()),
                   std::vector<double>(static_cast<std::size_t>(f.cols())));
  for (Index i = 0; i < f.rows(); ++i) {
    for (Index j = 0; j < f.cols(); ++j) out[i][j] = f(i, j);
  }
  return out;
}

std::vector<double> std_vec(const Vector& v) { return {v.data(), v.data() + v.size()}; }

double max_extra(const SolveTrace& trace, const std::string& name) {
  const auto& cols = trace.extra_columns();
  const auto it = std::find(cols.begin(), cols.end(), name);
  REQUIRE(it != cols.end());
  const auto k = static_cast<std::size_t>(it - cols.begin());
  double worst = 0.0;
  for (const auto& row : trace.rows()) worst = std::max(worst, row.extras[k]);
  return worst;
}

}  // namespace

TEST_CASE("matrix games with known equilibria") {
  const auto r = matrix_game_solve({rps()}, std::nullopt, tight());
  CHECK(r.run.trace.status == SolveStatus::kConverged);
  CHECK((r.x1 - Vector::Constant(3, 1.0 / 3)).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK((r.x2 - Vector::Constant(3, 1.0 / 3)).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(std::abs(r.value) <= 1e-6);

  const auto p = matrix_game_solve({pennies()}, std::nullopt, tight());
  CHECK((p.x1 - Vector::Constant(2, 0.5)).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK((p.x2 - Vector::Constant(2, 0.5)).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(std::abs(p.value) <= 1e-6);

  Matrix diag(2, 2);
  diag << 2, 0, 0, 1;
  const auto d = matrix_game_solve({diag}, std::nullopt, tight());
  CHECK(d.run.trace.status == SolveStatus::kConverged);
  CHECK(d.x1(0) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(d.x2(0) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(d.value == doctest::Approx(2.0 / 3).epsilon(1e-6));
  CHECK(d.gap <= 1e-5);
  CHECK(std::abs(d.x1.sum() - 1.0) <= 1e-8);
  CHECK(d.x1.minCoeff() >= -1e-8);
}

TEST_CASE("duality gap") {
  CHECK(std::abs(duality_gap({rps()}, Vector::Constant(3, 1.0 / 3),
                             Vector::Constant(3, 1.0 / 3))) <= 1e-15);
  Vector pure(2);
  pure << 1, 0;
  CHECK(duality_gap({pennies()}, pure, pure) == 2.0);
  // Off-simplex input is projected: (2, 0) -> (1, 0).
  Vector off(2);
  off << 2, 0;
  CHECK(duality_gap({pennies()}, off, pure) == 2.0);
  CHECK_THROWS_AS(duality_gap({pennies()}, Vector::Ones(3), pure), DimensionError);
}

TEST_CASE("project_simplex") {
  Vector v(3);
  v << 0.5, 2.0, -1.0;
  const Vector p = project_simplex(v);
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p.minCoeff() >= 0.0);
  CHECK(p(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p(1) == doctest::Approx(1.0));
}

TEST_CASE("saddle solver: pure feasibility when f = 0") {
  const Space r3(3);
  const Matrix ones = Matrix::Ones(1, 3);
  const Player pl{catalog::box(r3, Vector::Zero(3), Vector::Ones(3)), LinearMap(ones),
                  Vector::Constant(3, 0.5), Vector::Constant(1, 1.5), {}};
  const SaddleProblem prob{
      pl, pl,
      [](const Vector& a, const Vector& b) {
        return std::make_pair(Vector(Vector::Zero(a.size())), Vector(Vector::Zero(b.size())));
      },
      0.0,
      [](const Vector&, const Vector&) { return 0.0; }};
  Vector z0(3);
  z0 << 3, -1, 0.2;
  const auto res = saddle_solve(prob, 1.0, z0, -z0, Sequence::constant(1.0), tight());
  CHECK(res.trace.status == SolveStatus::kConverged);
  for (const Vector* x : {&res.x1, &res.x2}) {
    CHECK(x->minCoeff() >= -1e-6);
    CHECK(x->maxCoeff() <= 1.0 + 1e-6);
    CHECK(std::abs(x->sum() - 1.5) <= 1e-6);
  }
  CHECK(gradient_check(prob, 10, 0.1, 1) == 0.0);
}

TEST_CASE("saddle solver through the matrix wrapper") {
  const SaddleProblem prob = matrix_game_problem({rps()});
  const double gamma = 0.9 / prob.chi;
  const auto res = saddle_solve(prob, gamma, Vector(), Vector(), Sequence::constant(1.0), tight());
  CHECK((res.x1 - Vector::Constant(3, 1.0 / 3)).norm() <= 1e-6);
  CHECK((res.x2 - Vector::Constant(3, 1.0 / 3)).norm() <= 1e-6);
  CHECK_THROWS_AS(saddle_solve(prob, 2.0 / prob.chi, Vector(), Vector(),
                               Sequence::constant(1.0), tight()),
                  ConfigError);
}

TEST_CASE("property: random games against the exact LP") {
  Rng rng(51);
  for (int trial = 0; trial < 8; ++trial) {
    const Matrix f = random_matrix(rng, 3, 4);
    const auto res = matrix_game_solve({f}, std::nullopt, tight());
    REQUIRE(res.run.trace.status == SolveStatus::kConverged);
    Rows<Rational> exact(3, std::vector<Rational>(4));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 4; ++j) exact[i][j] = Rational(f(i, j));
    }
    const double value = testing::solve_game_lp<Rational>(exact).value.convert_to<double>();
    CHECK(res.gap <= 1e-5);
    CHECK(std::abs(res.value - value) <= 1e-5);
    // Feasibility along the whole run without projecting onto the simplex.
    CHECK(max_extra(res.run.trace, "affine1") <= 1e-9);
    CHECK(max_extra(res.run.trace, "affine2") <= 1e-9);
    const auto r = saddle_residuals(matrix_game_problem({f}), res.gamma, res.run.z1, res.run.z2);
    CHECK(r.positivity1 <= 1e-6);
    CHECK(r.positivity2 <= 1e-6);
  }
}

TEST_CASE("property: gradient oracles agree with finite differences") {
  Rng rng(52);
  CHECK(gradient_check(matrix_game_problem({random_matrix(rng, 3, 5)}), 100, 0.5, 3) <= 1e-4);
  const Grid g1 = make_grid(-1, 1, 11, GridRule::kTrapezoid);
  const Grid g2 = make_grid(0, 2, 7, GridRule::kMidpoint);
  const GridGame game = grid_game_from_function(
      g1, g2, [](double x, double y) { return std::sin(x) * y + x * x; });
  CHECK(gradient_check(grid_game_problem(game), 100, 0.5, 4) <= 1e-4);
}

TEST_CASE("property: antisymmetric games are solved symmetrically") {
  Rng rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix s = random_skew(rng, 4);
    const auto res = matrix_game_solve({s}, std::nullopt, tight());
    CHECK(res.x1 == res.x2);
    CHECK(std::abs(res.value) <= 1e-6);
  }
}

TEST_CASE("grids") {
  const Grid t = make_grid(0, 1, 5, GridRule::kTrapezoid);
  CHECK(t.mass() == doctest::Approx(1.0));
  CHECK(t.weights(0) == doctest::Approx(0.125));
  CHECK(t.weights(2) == doctest::Approx(0.25));
  const Grid m = make_grid(0, 2, 4, GridRule::kMidpoint);
  CHECK(m.mass() == doctest::Approx(2.0));
  CHECK(m.nodes(0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(make_grid(1, 1, 4, GridRule::kMidpoint), ConfigError);
  CHECK_THROWS_AS(make_grid(0, 1, 1, GridRule::kTrapezoid), ConfigError);
}

TEST_CASE("grid game with a zero kernel stays uniform") {
  const Grid g = make_grid(0, 2, 9, GridRule::kTrapezoid);
  const GridGame game{g, g, Matrix::Zero(9, 9)};
  const auto res = grid_game_solve(game, 1.0, tight());
  CHECK((res.x1 - Vector::Constant(9, 0.5)).norm() <= 1e-15);
  CHECK((res.x2 - Vector::Constant(9, 0.5)).norm() <= 1e-15);
}

TEST_CASE("grid games match the discretized LP") {
  struct Case {
    double lo, hi;
    Index points;
    double (*f)(double, double);
    double tol;
  };
  const std::vector<Case> cases{
      {-1, 1, 21, [](double x, double y) { return x * y; }, 1e-4},
      {0, 1, 41, [](double x, double y) { return (x - y) * (x - y); }, 1e-3},
  };
  for (const auto& c : cases) {
    const Grid g = make_grid(c.lo, c.hi, c.points, GridRule::kTrapezoid);
    const GridGame game = grid_game_from_function(g, g, c.f);
    const auto res = grid_game_solve(game, std::nullopt, tight());
    const Vector m1 = g.weights.cwiseProduct(res.x1);
    const Vector m2 = g.weights.cwiseProduct(res.x2);
    CHECK(res.x1.minCoeff() >= -1e-8);
    CHECK(res.x2.minCoeff() >= -1e-8);
    CHECK(std::abs(m1.sum() - 1.0) <= 1e-8);
    CHECK(std::abs(m2.sum() - 1.0) <= 1e-8);
    const Matrix& f = game.kernel;
    const auto lp = testing::solve_game_lp<double>(rows_of(f));
    const double d1 = testing::distance_to_optimal_set(rows_of(f), lp.value, 1e-9, std_vec(m1));
    const double d2 =
        testing::distance_to_optimal_set(rows_of(-f.transpose()), -lp.value, 1e-9, std_vec(m2));
    CHECK(d1 <= c.tol);
    CHECK(d2 <= c.tol);
    CHECK(std::abs(res.value - lp.value) <= c.tol);
  }
}
