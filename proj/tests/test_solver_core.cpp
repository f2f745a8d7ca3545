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

#include <cmath>
#include <limits>
#include <vector>

#include "fpif/error.hpp"
#include "fpif/random.hpp"
#include "fpif/solver_core.hpp"
#include "support/oracles.hpp"

using namespace fpif;

namespace {

Matrix rotation() {
  Matrix m(2, 2);
  m << 0, -1, 1, 0;
  return m;
}

StepSchedule constant_schedule(double delta, double lambda) {
  StepSchedule s;
  s.delta = Sequence::constant(delta);
  s.lambda = Sequence::constant(lambda);
  return s;
}

}  // namespace

TEST_CASE("tseng: box plus identity") {
  const Space r1(1);
  const auto a = catalog::box(r1, Vector::Constant(1, -1), Vector::Constant(1, 1));
  const auto b = lipschitz::linear(r1, Matrix::Identity(1, 1));
  StopRule stop;
  stop.residual_tol = 1e-12;
  stop.iterate_tol = 1e-12;
  const auto [z, trace] = tseng_solve(a, b, Vector::Constant(1, 0.5),
                                      constant_schedule(0.5, 1.0), stop);
  CHECK(trace.status == SolveStatus::kConverged);
  CHECK(std::abs(z(0)) <= 1e-10);
}

TEST_CASE("tseng: zero operators keep z constant") {
  const Space r3(3);
  Vector z0(3);
  z0 << 1, -2, 3;
  StopRule stop;
  stop.max_iter = 5;
  const auto [z, trace] = tseng_solve(catalog::zero(r3), lipschitz::zero(r3), z0,
                                      constant_schedule(1.0, 1.0), stop);
  CHECK(z == z0);
  for (const auto& [n, snap] : trace.snapshots()) CHECK(snap == z0);
  CHECK(trace.status == SolveStatus::kConverged);
}

TEST_CASE("tseng: identity plus rotation converges to the unique zero") {
  const Space r2(2);
  Rng rng(4);
  const Vector z0 = random_gaussian(rng, 2);
  const auto b = lipschitz::linear(r2, rotation());
  const auto a = catalog::scaled_identity(r2, 1.0);
  const auto [z, trace] = tseng_solve(a, b, z0, constant_schedule(0.5, 1.0), StopRule{});
  CHECK(trace.status == SolveStatus::kConverged);
  const Vector oracle = testing::qr_solve(Matrix::Identity(2, 2) + rotation(),
                                          Vector::Zero(2));
  CHECK((z - oracle).norm() <= 1e-7);
  CHECK(fejer_check(trace, r2, oracle));
}

TEST_CASE("fejer_check on constructed traces") {
  const Space r2(2);
  Vector z0(2);
  z0 << 1, 1;
  SolveTrace constant;
  for (long n = 0; n < 5; ++n) constant.add_snapshot(n, z0);
  CHECK(fejer_check(constant, r2, z0));

  SolveTrace perturbed;
  perturbed.add_snapshot(0, z0);
  perturbed.add_snapshot(1, 0.5 * z0);
  perturbed.add_snapshot(2, 0.6 * z0);
  CHECK_FALSE(fejer_check(perturbed, r2, Vector::Zero(2)));

  CHECK_THROWS_AS(fejer_check(SolveTrace{}, r2, z0), ConfigError);
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(constant_schedule(1.5, 1.0).validate(1.0), ConfigError);
  CHECK_THROWS_AS(constant_schedule(0.5, 1.2).validate(1.0), ConfigError);
  CHECK_THROWS_AS(constant_schedule(0.5, 0.0).validate(1.0), ConfigError);
  CHECK(constant_schedule(0.5, 1.0).validate(1.0) > 0.0);
  // eta = 0: any positive step.
  CHECK(constant_schedule(50.0, 1.0).validate(0.0) > 0.0);
  StepSchedule eps = constant_schedule(0.5, 1.0);
  eps.epsilon = 0.6;
  CHECK_THROWS_AS(eps.validate(1.0), ConfigError);
  StopRule bad;
  bad.residual_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("array schedules are followed and recorded") {
  const Space r2(2);
  StepSchedule s;
  s.delta = Sequence::array({0.2, 0.4, 0.6});
  s.lambda = Sequence::array({0.5, 1.0});
  StopRule stop;
  stop.max_iter = 6;
  stop.residual_tol = 1e-300;
  stop.iterate_tol = 1e-300;
  const auto [z, trace] = tseng_solve(catalog::scaled_identity(r2, 1.0),
                                      lipschitz::linear(r2, rotation()),
                                      Vector::Ones(2), s, stop);
  REQUIRE(trace.rows().size() == 6);
  CHECK(trace.rows()[0].delta == 0.2);
  CHECK(trace.rows()[1].delta == 0.4);
  CHECK(trace.rows()[5].delta == 0.6);
  CHECK(trace.rows()[0].lambda == 0.5);
  CHECK(trace.rows()[3].lambda == 1.0);
  CHECK(trace.status == SolveStatus::kMaxIter);
}

TEST_CASE("non-finite values stop the run as diverged") {
  const Space r1(1);
  const auto b = lipschitz::from_function(
      r1, [](const Vector& x) {
        return Vector(x * std::numeric_limits<double>::quiet_NaN());
      },
      1.0);
  const auto [z, trace] = tseng_solve(catalog::zero(r1), b, Vector::Ones(1),
                                      constant_schedule(0.5, 1.0), StopRule{});
  CHECK(trace.status == SolveStatus::kDiverged);
}

TEST_CASE("trace csv header") {
  const Space r1(1);
  StopRule stop;
  stop.max_iter = 2;
  const auto [z, trace] = tseng_solve(catalog::zero(r1), lipschitz::zero(r1),
                                      Vector::Ones(1), constant_schedule(1.0, 1.0), stop);
  const std::string csv = trace.csv();
  CHECK(csv.rfind("iter,residual,delta,lambda,step_norm", 0) == 0);
}

TEST_CASE("property: iteration identities on random affine problems") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + trial % 4;
    const Space space(n);
    const Matrix ma = random_spd(rng, n);
    const Matrix mb = random_skew(rng, n) + 0.1 * Matrix::Identity(n, n);
    const Vector c = random_gaussian(rng, n);
    const auto a = catalog::linear(space, ma);
    const auto b = lipschitz::affine(space, mb, c);
    const double eta = b.chi();
    const double delta = 0.6 / eta;
    const double lambda = 0.7;
    const Vector z_star = testing::qr_solve(ma + mb, -c);
    const Vector z0 = random_gaussian(rng, n);

    double partial = 0.0;
    double worst_excess = -1.0;
    std::vector<double> steps;
    SolveOptions opt;
    opt.observer = [&](const IterationView& v) {
      const double tr = (v.t - v.r).squaredNorm();
      const double sz = (v.s - v.z).squaredNorm();
      partial += v.lambda * (1 - v.lambda) * tr + (1 - std::pow(v.delta * eta, 2)) * sz;
      worst_excess = std::max(worst_excess, partial - (z0 - z_star).squaredNorm());
      steps.push_back((v.z_next - v.z).norm());
      CHECK((v.z_next - v.z).norm() ==
            doctest::Approx(v.lambda * (v.t - v.r).norm()).epsilon(1e-12));
    };
    const auto [z, trace] = tseng_solve(a, b, z0, constant_schedule(delta, lambda),
                                        StopRule{}, opt);
    CHECK(trace.status == SolveStatus::kConverged);
    CHECK((z - z_star).norm() <= 1e-6);
    CHECK(worst_excess <= 1e-6);
    CHECK(fejer_check(trace, space, z_star));
    const std::size_t tenth = std::max<std::size_t>(1, steps.size() / 10);
    double first = 0.0, last = 0.0;
    for (std::size_t k = 0; k < tenth; ++k) {
      first += steps[k];
      last += steps[steps.size() - 1 - k];
    }
    CHECK(last <= first);

    // lambda = 1: unrelaxed update z + (t - r).
    double dev = 0.0;
    SolveOptions unrelaxed;
    unrelaxed.observer = [&](const IterationView& v) {
      dev = std::max(dev, (v.z_next - (v.t - v.r + v.z)).norm());
    };
    StopRule few;
    few.max_iter = 50;
    tseng_solve(a, b, z0, constant_schedule(delta, 1.0), few, unrelaxed);
    CHECK(dev == 0.0);
  }
}
