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
#include <cmath>
#include <vector>

#include "fpif/error.hpp"
#include "fpif/random.hpp"
#include "fpif/splitting.hpp"
#include "support/oracles.hpp"

using namespace fpif;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Projector diagonal(const Space& space) {
  const std::vector<Vector> basis{Vector::Ones(space.dim())};
  return projector_from_basis(space, basis);
}

StepSchedule lambda_schedule(double lambda) {
  StepSchedule s;
  s.lambda = Sequence::constant(lambda);
  return s;
}

double max_extra(const SolveTrace& trace, std::size_t column) {
  double worst = 0.0;
  for (const auto& row : trace.rows()) worst = std::max(worst, row.extras.at(column));
  return worst;
}

}  // namespace

TEST_CASE("fpif: projection onto the diagonal") {
  const Space r2(2);
  const InclusionProblem prob{catalog::zero(r2),
                              lipschitz::affine(r2, Matrix::Identity(2, 2), vec({-2, 0})),
                              diagonal(r2), 0.5};
  const auto res = fpif_solve(prob, Vector::Zero(2), Vector::Zero(2),
                              lambda_schedule(1.0), StopRule{});
  CHECK(res.trace.status == SolveStatus::kConverged);
  const Matrix p = testing::span_projector(Vector::Ones(2));
  CHECK((res.point.x - p * vec({2, 0})).norm() <= 1e-7);
}

TEST_CASE("fpif: proximal point on the absolute value") {
  const Space r1(1);
  const InclusionProblem prob{catalog::l1(r1, 1.0), lipschitz::zero(r1),
                              Projector::identity(r1), 1.0};
  const auto res = fpif_solve(prob, vec({5}), Vector::Zero(1), lambda_schedule(1.0),
                              StopRule{});
  CHECK(res.trace.status == SolveStatus::kConverged);
  CHECK(res.point.x(0) == 0.0);
  for (const auto& [n, z] : res.trace.snapshots()) {
    CHECK(z(0) == doctest::Approx(std::max(5.0 - n, 0.0)));
  }
}

TEST_CASE("fpif: V = {0} forces x = 0") {
  const Space r2(2);
  const InclusionProblem prob{catalog::box(r2, vec({-1, -1}), vec({2, 2})),
                              lipschitz::affine(r2, Matrix::Identity(2, 2), vec({1, 0})),
                              Projector::zero(r2), 0.5};
  const auto res = fpif_solve(prob, Vector::Zero(2), Vector::Zero(2),
                              lambda_schedule(1.0), StopRule{});
  CHECK(res.point.x.isZero(0.0));
  // B enters through P_V B, which vanishes here, and 0 is interior to the box.
  CHECK(res.point.y.norm() <= 1e-6);
  CHECK(fpif_residuals(prob, res.z).inclusion <= 1e-6);
}

TEST_CASE("fpif: configuration errors") {
  const Space r2(2);
  InclusionProblem prob{catalog::l1(r2, 1.0),
                        lipschitz::linear(r2, Matrix::Identity(2, 2)),
                        Projector::identity(r2), 1.5};
  CHECK_THROWS_AS(fpif_solve(prob, Vector::Zero(2), Vector::Zero(2),
                             lambda_schedule(1.0), StopRule{}),
                  ConfigError);
  prob.gamma = 0.5;
  StepSchedule varying = lambda_schedule(1.0);
  varying.delta = Sequence::array({0.5, 1.0});
  CHECK_THROWS_AS(fpif_solve(prob, Vector::Zero(2), Vector::Zero(2), varying,
                             StopRule{}),
                  UnsupportedError);
  CHECK(default_gamma(2.0) == doctest::Approx(0.45));
  CHECK(default_gamma(0.0) == 1.0);
}

TEST_CASE("fpif: initial points outside V are projected") {
  const Space r2(2);
  const InclusionProblem prob{catalog::zero(r2), lipschitz::zero(r2), diagonal(r2), 1.0};
  StopRule stop;
  stop.max_iter = 1;
  const auto res = fpif_solve(prob, vec({1, 0}), vec({1, 1}), lambda_schedule(1.0), stop);
  // x0 -> (0.5, 0.5), y0 -> 0, and A = B = 0 keeps z fixed.
  CHECK((res.z - vec({0.5, 0.5})).norm() <= 1e-15);
}

TEST_CASE("fpif: varying delta with affine A reaches the same solution") {
  Rng rng(12);
  const Space r3(3);
  const Matrix m = random_spd(rng, 3);
  const auto a = catalog::affine(r3, m, random_gaussian(rng, 3));
  const auto b = lipschitz::affine(r3, random_skew(rng, 3), random_gaussian(rng, 3));
  const Projector v = random_subspace(rng, r3, 2);
  const InclusionProblem prob{a, b, v, 0.5 / std::max(b.chi(), 1e-3)};
  StepSchedule s = lambda_schedule(1.0);
  const auto unit = fpif_solve(prob, Vector::Zero(3), Vector::Zero(3), s, StopRule{});
  s.delta = Sequence::array({0.5, 0.8, 1.2, 0.9});
  const auto varied = fpif_solve(prob, Vector::Zero(3), Vector::Zero(3), s, StopRule{});
  REQUIRE(unit.trace.status == SolveStatus::kConverged);
  REQUIRE(varied.trace.status == SolveStatus::kConverged);
  CHECK((unit.point.x - varied.point.x).norm() <= 1e-6);
  CHECK(max_extra(varied.trace, 0) <= 1e-9);
  CHECK(max_extra(varied.trace, 1) <= 1e-9);
}

TEST_CASE("reduce_to_tseng_check") {
  const Space r2(2);
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  const InclusionProblem rp{catalog::scaled_identity(r2, 1.0), lipschitz::linear(r2, rot),
                            Projector::identity(r2), 0.5};
  Rng rng(13);
  CHECK(reduce_to_tseng_check(rp, random_gaussian(rng, 2), 500) <= 1e-12);
  const InclusionProblem zp{catalog::zero(r2), lipschitz::zero(r2),
                            Projector::identity(r2), 1.0};
  CHECK(reduce_to_tseng_check(zp, random_gaussian(rng, 2), 100) == 0.0);
  const Space r3(3);
  const InclusionProblem bp{catalog::box(r3, -Vector::Ones(3), Vector::Ones(3)),
                            lipschitz::affine(r3, random_monotone(rng, 3), random_gaussian(rng, 3)),
                            Projector::identity(r3), 0.3};
  CHECK(reduce_to_tseng_check(bp, random_gaussian(rng, 3), 500) <= 1e-12);
}

TEST_CASE("reduce_to_dr_check") {
  const Space r2(2);
  const InclusionProblem bp{catalog::box(r2, vec({1, 1}), vec({3, 3})), lipschitz::zero(r2),
                            diagonal(r2), 1.0};
  CHECK(reduce_to_dr_check(bp, vec({-4, 7}), Sequence::constant(0.9), 500) <= 1e-12);
  StepSchedule s = lambda_schedule(0.9);
  const auto res = fpif_solve(bp, Vector::Zero(2), Vector::Zero(2), s, StopRule{});
  CHECK(std::abs(res.point.x(0) - res.point.x(1)) <= 1e-9);
  CHECK(res.point.x(0) >= 1.0 - 1e-7);
  CHECK(res.point.x(0) <= 3.0 + 1e-7);

  const InclusionProblem zp{catalog::zero(r2), lipschitz::zero(r2), diagonal(r2), 1.0};
  CHECK(reduce_to_dr_check(zp, vec({1, 2}), Sequence::constant(1.0), 50) == 0.0);

  Matrix px = Matrix::Zero(2, 2);
  px(0, 0) = 1.0;
  const InclusionProblem pp{catalog::point(r2, vec({2, 0})), lipschitz::zero(r2),
                            Projector(r2, px), 1.0};
  CHECK(reduce_to_dr_check(pp, vec({0.5, 3}), Sequence::constant(1.0), 200) <= 1e-12);
  const auto pres = fpif_solve(pp, Vector::Zero(2), Vector::Zero(2), lambda_schedule(1.0),
                               StopRule{});
  CHECK((pres.point.x - vec({2, 0})).norm() <= 1e-8);
}

TEST_CASE("property: confinement, fixed point, Fejer and gamma invariance") {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + trial % 4;
    const Space space(n);
    // Strongly monotone B makes the solution unique.
    const Matrix mb = random_spd(rng, n) + random_skew(rng, n);
    const Vector c = random_gaussian(rng, n);
    const auto b = lipschitz::affine(space, mb, c);
    const auto a = catalog::box(space, -Vector::Ones(n), Vector::Ones(n));
    const Projector v = random_subspace(rng, space, 1 + trial % n);
    const double g1 = 0.9 / b.chi();
    const double g2 = 0.4 / b.chi();
    const InclusionProblem p1{a, b, v, g1};
    const InclusionProblem p2{a, b, v, g2};
    StopRule stop;
    stop.residual_tol = 1e-11;
    stop.iterate_tol = 1e-11;
    const auto r1 = fpif_solve(p1, Vector::Zero(n), Vector::Zero(n), lambda_schedule(1.0), stop);
    const auto r2 = fpif_solve(p2, Vector::Zero(n), Vector::Zero(n), lambda_schedule(0.8), stop);
    REQUIRE(r1.trace.status == SolveStatus::kConverged);
    REQUIRE(r2.trace.status == SolveStatus::kConverged);
    CHECK(max_extra(r1.trace, 0) <= 1e-9);
    CHECK(max_extra(r1.trace, 1) <= 1e-9);
    CHECK((r1.point.x - r2.point.x).norm() <= 1e-5);
    const auto res = fpif_residuals(p1, r1.z);
    CHECK(res.inclusion <= 1e-6);
    CHECK(res.fixed_point <= 10 * stop.residual_tol * std::max(1.0, r1.z.norm()));

    // Linear A: the fixed point is available in closed form. With Q an
    // orthonormal basis of V, x = Q xi solves Q^T (M_A + M_B) Q xi = -Q^T c
    // and y = P^perp M_A x.
    const Matrix ma = random_spd(rng, n);
    const InclusionProblem lp{catalog::linear(space, ma), b, v, g1};
    const Matrix q = testing::range_basis(v.matrix());
    const Vector xi = testing::qr_solve(q.transpose() * (ma + mb) * q, -q.transpose() * c);
    const Vector xs = q * xi;
    const Vector ys = (Matrix::Identity(n, n) - v.matrix()) * (ma * xs);
    const auto lr = fpif_solve(lp, Vector::Zero(n), Vector::Zero(n), lambda_schedule(0.9), stop);
    CHECK((lr.point.x - xs).norm() <= 1e-8);
    CHECK(fejer_check(lr.trace, space, xs + g1 * ys, 1e-10));
  }
}
