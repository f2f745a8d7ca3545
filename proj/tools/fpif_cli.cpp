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

// fpif run <config> [--max-iter N] [--tol X] [--gamma G] [--out DIR] [--seed S]
// fpif verify <solution> <config> [--gamma G] [--seed S]
//
// Exit codes: 0 converged (or verify succeeded), 2 iteration cap reached,
// 3 diverged, 1 any error.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fpif/fpif.h"

namespace {

int report_error(fpif_status status) {
  std::fprintf(stderr, "fpif: error (%d): %s\n", static_cast<int>(status),
               fpif_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-point splitting solvers for monotone inclusions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fpif_version()));

  std::string config_path;
  std::optional<long> max_iter;
  std::optional<double> tol;
  std::optional<double> gamma;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  CLI::App* run = app.add_subcommand("run", "Solve a problem config");
  run->add_option("config", config_path, "JSON problem config")->required();
  run->add_option("--max-iter", max_iter, "Iteration cap");
  run->add_option("--tol", tol, "Residual and iterate tolerance");
  run->add_option("--gamma", gamma, "Step size gamma (delta for tseng)");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Seed for random data and initial points");

  std::string solution_path;
  std::string verify_config;
  CLI::App* verify =
      app.add_subcommand("verify", "Recompute residuals of a solution file");
  verify->add_option("solution", solution_path, "solution.csv from run")->required();
  verify->add_option("config", verify_config, "JSON problem config")->required();
  // Residuals depend on gamma and on seeded random data, so both must match the run.
  verify->add_option("--gamma", gamma, "Step size gamma used by the run");
  verify->add_option("--seed", seed, "Seed used by the run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) {
    fpif_overrides ov{};
    if (max_iter) {
      ov.has_max_iter = 1;
      ov.max_iter = *max_iter;
    }
    if (tol) {
      ov.has_tol = 1;
      ov.tol = *tol;
    }
    if (gamma) {
      ov.has_gamma = 1;
      ov.gamma = *gamma;
    }
    if (seed) {
      ov.has_seed = 1;
      ov.seed = *seed;
    }
    if (out_dir) ov.out_dir = out_dir->c_str();
    fpif_problem* problem = nullptr;
    fpif_status st = fpif_problem_load(config_path.c_str(), &ov, &problem);
    if (st != FPIF_OK) return report_error(st);
    fpif_result* result = nullptr;
    st = fpif_run(problem, &result);
    fpif_problem_free(problem);
    if (st != FPIF_OK) return report_error(st);
    std::fputs(fpif_result_report_json(result), stdout);
    const fpif_solve_status solve = fpif_result_status(result);
    fpif_result_free(result);
    switch (solve) {
      case FPIF_SOLVE_CONVERGED:
        return 0;
      case FPIF_SOLVE_MAX_ITER:
        return 2;
      case FPIF_SOLVE_DIVERGED:
        return 3;
    }
    return 1;
  }

  fpif_overrides ov{};
  if (gamma) {
    ov.has_gamma = 1;
    ov.gamma = *gamma;
  }
  if (seed) {
    ov.has_seed = 1;
    ov.seed = *seed;
  }
  fpif_problem* problem = nullptr;
  fpif_status st = fpif_problem_load(verify_config.c_str(), &ov, &problem);
  if (st != FPIF_OK) return report_error(st);
  char* json = nullptr;
  st = fpif_verify(solution_path.c_str(), problem, &json);
  fpif_problem_free(problem);
  if (st != FPIF_OK) return report_error(st);
  std::fputs(json, stdout);
  fpif_string_free(json);
  return 0;
}
