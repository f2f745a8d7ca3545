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

// Iteration control shared by every solver: step schedules, stopping rules,
// traces, and the relaxed forward-backward-forward (Tseng) iteration
//
//   r = z - delta B z,  s = J_{delta A} r,  t = s - delta B s,
//   z+ = z + lambda (t - r).

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpif/hilbert.hpp"
#include "fpif/operators.hpp"

namespace fpif {

// A real sequence: constant, or an explicit array whose last entry repeats.
class Sequence {
 public:
  static Sequence constant(double value);
  static Sequence array(std::vector<double> values);

  double operator()(long n) const;
  bool is_constant() const { return values_.size() == 1; }
  std::span<const double> values() const { return values_; }
  double min() const;
  double max() const;

 private:
  explicit Sequence(std::vector<double> values);
  std::vector<double> values_;
};

struct StepSchedule {
  Sequence delta = Sequence::constant(1.0);
  Sequence lambda = Sequence::constant(1.0);
  // When absent, the largest epsilon compatible with the sequences is used.
  std::optional<double> epsilon;

  // Checks epsilon in ]0, max{1, 1/(2 eta)}[, delta_n in [eps, 1/eta - eps]
  // and lambda_n in [eps, 1]. eta = 0 only requires delta_n >= eps > 0.
  // Returns the epsilon in force; throws ConfigError otherwise.
  double validate(double eta) const;
};

struct StopRule {
  double residual_tol = 1e-8;
  double iterate_tol = 1e-8;
  long max_iter = 100000;

  void validate() const;
};

enum class SolveStatus { kConverged, kMaxIter, kDiverged };

const char* to_string(SolveStatus status);

struct TraceRow {
  long iter = 0;
  double residual = 0.0;  // |t_n - r_n|
  double delta = 0.0;
  double lambda = 0.0;
  double step_norm = 0.0;  // |z_{n+1} - z_n|
  std::vector<double> extras;
};

class SolveTrace {
 public:
  explicit SolveTrace(std::vector<std::string> extra_columns = {});

  const std::vector<std::string>& extra_columns() const { return extra_columns_; }
  const std::vector<TraceRow>& rows() const { return rows_; }
  // (n, z_n) pairs; z_0 first, thinned above the dense limit.
  const std::vector<std::pair<long, Vector>>& snapshots() const {
    return snapshots_;
  }

  SolveStatus status = SolveStatus::kMaxIter;
  long iterations = 0;
  // |t - r| / max(1, |z|) of the last recorded iteration.
  double final_relative_residual = 0.0;

  void add_row(TraceRow row);
  void add_snapshot(long n, Vector z);

  // Header iter,residual,delta,lambda,step_norm[,extras]; %.17g values.
  void write_csv(std::ostream& out) const;
  std::string csv() const;

 private:
  std::vector<std::string> extra_columns_;
  std::vector<TraceRow> rows_;
  std::vector<std::pair<long, Vector>> snapshots_;
};

// Everything computed in one iteration, for observers.
struct IterationView {
  long n;
  const Vector& z;
  const Vector& r;
  const Vector& s;
  const Vector& t;
  const Vector& z_next;
  double delta;
  double lambda;
};

using Observer = std::function<void(const IterationView&)>;

struct SolveOptions {
  bool keep_snapshots = true;
  // Every iterate is kept below this count, then one per power-of-ten stride.
  long dense_snapshot_limit = 10000;
  Observer observer;
};

bool snapshot_due(long n, long dense_limit);

// Bookkeeping for one run: trace rows, snapshots, stopping decisions.
class IterationRecorder {
 public:
  IterationRecorder(SolveTrace& trace, const StopRule& stop,
                    const SolveOptions& options);

  void start(const Vector& z0);
  // Records iteration n. `scale` is max(1, |z_n|). Returns true when the run
  // must stop, with trace.status set.
  bool record(long n, double residual, double scale, double delta,
              double lambda, double step_norm, std::vector<double> extras,
              const Vector& z_next);

 private:
  SolveTrace& trace_;
  const StopRule& stop_;
  const SolveOptions& options_;
};

bool all_finite(const Vector& v);

// Relaxed Tseng iteration on 0 in A z + B z.
std::pair<Vector, SolveTrace> tseng_solve(const ResolventOp& a,
                                          const LipschitzMap& b,
                                          const Vector& z0,
                                          const StepSchedule& schedule,
                                          const StopRule& stop,
                                          const SolveOptions& options = {});

// True iff |z_{k+1} - z*| <= |z_k - z*| + 1e-10 along the recorded snapshots.
// Throws ConfigError for a trace without snapshots.
bool fejer_check(const SolveTrace& trace, const Space& space,
                 const Vector& z_star, double tol = 1e-10);

}  // namespace fpif
