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

// Solve a loaded config, write its outputs, and re-check a solution file.
// Internal to the shared library.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace fpif::runner {

// Named vectors in file order. "state" holds the solver's raw iterate; the
// other components are the reported solution.
struct Solution {
  std::vector<std::pair<std::string, Vector>> components;

  const Vector* find(const std::string& name) const;
};

using Residuals = std::vector<std::pair<std::string, double>>;

struct RunReport {
  std::string kind;
  SolveStatus status = SolveStatus::kMaxIter;
  long iterations = 0;
  double residual = 0.0;  // final relative residual of the trace
  double wall_time = 0.0;
  std::filesystem::path solution_path;
  std::filesystem::path trace_path;
  std::filesystem::path report_path;
  Residuals residuals;
  Solution solution;
  std::string report_json;
};

// Solves and writes solution.csv, trace.csv and report.json into the
// config's output directory (each through a temporary file and a rename).
RunReport run(const config::ProblemConfig& cfg);

// Residuals of a solution without iterating. Fixed-point residuals come from
// "state"; gaps, feasibility and inclusion checks from the reported
// components. Both run and verify go through this function.
Residuals evaluate(const config::ProblemConfig& cfg, const Solution& sol);

// component,index,value with %.17g values.
void write_solution(const std::filesystem::path& path, const Solution& sol);
Solution read_solution(const std::filesystem::path& path);

std::string residuals_json(const Residuals& res);

// Writes through path.tmp and renames over path.
void write_atomic(const std::filesystem::path& path, const std::string& body);

}  // namespace fpif::runner
