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

// JSON problem configs. Internal to the shared library.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fpif/games.hpp"
#include "fpif/primal_dual.hpp"
#include "fpif/solver_core.hpp"
#include "fpif/splitting.hpp"
#include "fpif/sum.hpp"

namespace fpif::config {

struct Overrides {
  std::optional<long> max_iter;
  std::optional<double> tol;
  std::optional<double> gamma;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

struct TsengSetup {
  ResolventOp a;
  LipschitzMap b;
  StepSchedule schedule;
  Vector z0;
};

struct FpifSetup {
  InclusionProblem problem;
  StepSchedule schedule;  // gamma lives in the problem
  Vector x0;
  Vector y0;
};

struct SumSetup {
  SumProblem problem;
  Sequence lambda;
  std::vector<Vector> z0;
};

struct PDSetup {
  PDProblem problem;
  double gamma;
  Sequence lambda;
  Vector x0;
  std::vector<Vector> u0;
};

struct MatrixGameSetup {
  MatrixGame game;
  std::optional<double> gamma;
  Sequence lambda;
};

struct GridGameSetup {
  GridGame game;
  std::optional<double> gamma;
  Sequence lambda;
};

using Setup = std::variant<std::monostate, TsengSetup, FpifSetup, SumSetup, PDSetup,
                           MatrixGameSetup, GridGameSetup>;

struct ProblemConfig {
  std::string kind;
  std::filesystem::path source;
  std::uint64_t seed = 42;
  StopRule stop;
  std::filesystem::path out_dir;
  Setup setup;
};

// Reads, validates and assembles. Schema violations raise ConfigError with
// the offending field path ("$.blocks[0].L: ...").
ProblemConfig load(const std::filesystem::path& path, const Overrides& ov);
ProblemConfig parse(const std::string& text,
                    const std::filesystem::path& base_dir,
                    const Overrides& ov);

// Numeric CSV without header; blank lines and '#' comments are skipped.
Matrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace fpif::config
