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

#include "fpif/solver_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "fpif/error.hpp"

namespace fpif {

Sequence::Sequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("sequence: no values");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ConfigError("sequence: non-finite value");
  }
}

Sequence Sequence::constant(double value) { return Sequence({value}); }

Sequence Sequence::array(std::vector<double> values) {
  return Sequence(std::move(values));
}

double Sequence::operator()(long n) const {
  const auto i = static_cast<std::size_t>(std::max(0L, n));
  return i < values_.size() ? values_[i] : values_.back();
}

double Sequence::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double Sequence::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

double StepSchedule::validate(double eta) const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw ConfigError("schedule: operator constant must be finite and >= 0");
  }
  const double dmin = delta.min();
  const double dmax = delta.max();
  const double lmin = lambda.min();
  const double lmax = lambda.max();
  if (lmax > 1.0) {
    throw ConfigError("schedule: lambda_n must lie in [eps, 1], got " +
                      num(lmax));
  }
  const double eps_cap =
      eta > 0.0 ? std::max(1.0, 1.0 / (2.0 * eta))
                : std::numeric_limits<double>::infinity();
  double eps;
  if (epsilon) {
    eps = *epsilon;
  } else {
    eps = std::min(dmin, lmin);
    if (eta > 0.0) eps = std::min(eps, 1.0 / eta - dmax);
    // Strictly inside the open interval.
    if (eps >= eps_cap) eps = 0.5 * eps_cap;
  }
  if (!(eps > 0.0) || !(eps < eps_cap)) {
    throw ConfigError("schedule: epsilon must lie in ]0, max{1, 1/(2 eta)}[ "
                      "(eta = " + num(eta) + "), no admissible value for " +
                      "delta in [" + num(dmin) + ", " + num(dmax) +
                      "], lambda in [" + num(lmin) + ", " + num(lmax) + "]");
  }
  if (dmin < eps) {
    throw ConfigError("schedule: delta_n = " + num(dmin) +
                      " is below epsilon = " + num(eps));
  }
  if (eta > 0.0 && dmax > 1.0 / eta - eps) {
    throw ConfigError("schedule: delta_n = " + num(dmax) +
                      " exceeds 1/eta - epsilon = " + num(1.0 / eta - eps) +
                      " (eta = " + num(eta) + ")");
  }
  if (lmin < eps) {
    throw ConfigError("schedule: lambda_n = " + num(lmin) +
                      " is below epsilon = " + num(eps));
  }
  return eps;
}

void StopRule::validate() const {
  if (!(residual_tol > 0.0)) throw ConfigError("stop: tol must be > 0");
  if (!(iterate_tol > 0.0)) throw ConfigError("stop: iterate_tol must be > 0");
  if (max_iter < 1) throw ConfigError("stop: max_iter must be >= 1");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIter:
      return "max_iter";
    case SolveStatus::kDiverged:
      return "diverged";
  }
  return "unknown";
}

SolveTrace::SolveTrace(std::vector<std::string> extra_columns)
    : extra_columns_(std::move(extra_columns)) {}

void SolveTrace::add_row(TraceRow row) { rows_.push_back(std::move(row)); }

void SolveTrace::add_snapshot(long n, Vector z) {
  snapshots_.emplace_back(n, std::move(z));
}

void SolveTrace::write_csv(std::ostream& out) const {
  out << "iter,residual,delta,lambda,step_norm";
  for (const auto& c : extra_columns_) out << ',' << c;
  out << '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << ',' << buf;
  };
  for (const auto& row : rows_) {
    out << row.iter;
    put(row.residual);
    put(row.delta);
    put(row.lambda);
    put(row.step_norm);
    for (double e : row.extras) put(e);
    out << '\n';
  }
}

std::string SolveTrace::csv() const {
  std::ostringstream ss;
  write_csv(ss);
  return ss.str();
}

bool snapshot_due(long n, long dense_limit) {
  if (n < dense_limit) return true;
  long stride = 1;
  while (n / stride >= dense_limit) stride *= 10;
  return n % stride == 0;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

IterationRecorder::IterationRecorder(SolveTrace& trace, const StopRule& stop,
                                     const SolveOptions& options)
    : trace_(trace), stop_(stop), options_(options) {}

void IterationRecorder::start(const Vector& z0) {
  if (options_.keep_snapshots) trace_.add_snapshot(0, z0);
}

bool IterationRecorder::record(long n, double residual, double scale,
                               double delta, double lambda, double step_norm,
                               std::vector<double> extras,
                               const Vector& z_next) {
  trace_.add_row(
      TraceRow{n, residual, delta, lambda, step_norm, std::move(extras)});
  trace_.iterations = n + 1;
  trace_.final_relative_residual = residual / scale;
  if (!std::isfinite(residual) || !all_finite(z_next)) {
    trace_.status = SolveStatus::kDiverged;
    return true;
  }
  if (options_.keep_snapshots &&
      snapshot_due(n + 1, options_.dense_snapshot_limit)) {
    trace_.add_snapshot(n + 1, z_next);
  }
  if (residual / scale <= stop_.residual_tol &&
      step_norm / scale <= stop_.iterate_tol) {
    trace_.status = SolveStatus::kConverged;
    return true;
  }
  if (n + 1 >= stop_.max_iter) {
    trace_.status = SolveStatus::kMaxIter;
    return true;
  }
  return false;
}

std::pair<Vector, SolveTrace> tseng_solve(const ResolventOp& a,
                                          const LipschitzMap& b,
                                          const Vector& z0,
                                          const StepSchedule& schedule,
                                          const StopRule& stop,
                                          const SolveOptions& options) {
  const Space& space = a.space();
  if (!(b.space() == space)) {
    throw DimensionError("tseng: A and B live in different spaces");
  }
  check_point(space, z0, "tseng initial point");
  schedule.validate(b.chi());
  stop.validate();

  SolveTrace trace({"fbf_gap"});
  IterationRecorder recorder(trace, stop, options);
  Vector z = z0;
  recorder.start(z);

  double bound_delta = std::numeric_limits<double>::quiet_NaN();
  VectorMap resolvent;
  for (long n = 0;; ++n) {
    const double delta = schedule.delta(n);
    const double lambda = schedule.lambda(n);
    if (delta != bound_delta) {
      resolvent = a.bind(delta);
      bound_delta = delta;
    }
    const Vector r = z - delta * b(z);
    const Vector s = resolvent(r);
    const Vector t = s - delta * b(s);
    const Vector diff = t - r;
    const Vector z_next = z + lambda * diff;
    const double residual = space.norm(diff);
    const double step = space.norm(z_next - z);
    const double scale = std::max(1.0, space.norm(z));
    if (options.observer) {
      options.observer(IterationView{n, z, r, s, t, z_next, delta, lambda});
    }
    const bool done = recorder.record(n, residual, scale, delta, lambda, step,
                                      {space.norm(s - z)}, z_next);
    if (trace.status == SolveStatus::kDiverged) break;
    z = z_next;
    if (done) break;
  }
  return {z, std::move(trace)};
}

bool fejer_check(const SolveTrace& trace, const Space& space,
                 const Vector& z_star, double tol) {
  const auto& snaps = trace.snapshots();
  if (snaps.empty()) {
    throw ConfigError("fejer_check: trace has no iterate snapshots");
  }
  check_point(space, z_star, "fejer_check reference point");
  double prev = space.norm(snaps.front().second - z_star);
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    const double d = space.norm(snaps[k].second - z_star);
    if (d > prev + tol) return false;
    prev = d;
  }
  return true;
}

}  // namespace fpif
