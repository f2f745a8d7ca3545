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

#include "fpif/fpif.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "config.hpp"
#include "fpif/error.hpp"
#include "runner.hpp"

struct fpif_problem {
  fpif::config::ProblemConfig cfg;
};

struct fpif_result {
  fpif::runner::RunReport report;
  std::string solution_path;
  std::string trace_path;
  std::string report_path;
};

namespace {

thread_local std::string g_last_error;

fpif_status fail(fpif_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

fpif_status from_code(fpif::ErrorCode code) {
  switch (code) {
    case fpif::ErrorCode::kConfig:
      return FPIF_ERR_CONFIG;
    case fpif::ErrorCode::kDimension:
      return FPIF_ERR_DIMENSION;
    case fpif::ErrorCode::kUnsupported:
      return FPIF_ERR_UNSUPPORTED;
    case fpif::ErrorCode::kNoConvergence:
      return FPIF_ERR_NO_CONVERGENCE;
    case fpif::ErrorCode::kIo:
      return FPIF_ERR_IO;
  }
  return FPIF_ERR_INTERNAL;
}

template <typename F>
fpif_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return FPIF_OK;
  } catch (const fpif::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FPIF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FPIF_ERR_INTERNAL, e.what());
  }
}

fpif::config::Overrides convert(const fpif_overrides* o) {
  fpif::config::Overrides ov;
  if (!o) return ov;
  if (o->has_max_iter) ov.max_iter = o->max_iter;
  if (o->has_tol) ov.tol = o->tol;
  if (o->has_gamma) ov.gamma = o->gamma;
  if (o->has_seed) ov.seed = o->seed;
  if (o->out_dir) ov.out_dir = std::string(o->out_dir);
  return ov;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* fpif_version(void) { return "0.1.0"; }

const char* fpif_last_error(void) { return g_last_error.c_str(); }

fpif_status fpif_problem_load(const char* config_path,
                              const fpif_overrides* overrides,
                              fpif_problem** out) {
  if (!config_path || !out) return fail(FPIF_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    auto* p = new fpif_problem{fpif::config::load(config_path, convert(overrides))};
    *out = p;
  });
}

fpif_status fpif_problem_parse(const char* json, const char* base_dir,
                               const fpif_overrides* overrides,
                               fpif_problem** out) {
  if (!json || !out) return fail(FPIF_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    auto* p = new fpif_problem{fpif::config::parse(
        json, base_dir ? base_dir : ".", convert(overrides))};
    *out = p;
  });
}

void fpif_problem_free(fpif_problem* problem) { delete problem; }

const char* fpif_problem_kind(const fpif_problem* problem) {
  return problem ? problem->cfg.kind.c_str() : "";
}

fpif_status fpif_run(const fpif_problem* problem, fpif_result** out) {
  if (!problem || !out) return fail(FPIF_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    auto* r = new fpif_result{fpif::runner::run(problem->cfg), {}, {}, {}};
    r->solution_path = r->report.solution_path.string();
    r->trace_path = r->report.trace_path.string();
    r->report_path = r->report.report_path.string();
    *out = r;
  });
}

void fpif_result_free(fpif_result* result) { delete result; }

fpif_solve_status fpif_result_status(const fpif_result* result) {
  if (!result) return FPIF_SOLVE_DIVERGED;
  switch (result->report.status) {
    case fpif::SolveStatus::kConverged:
      return FPIF_SOLVE_CONVERGED;
    case fpif::SolveStatus::kMaxIter:
      return FPIF_SOLVE_MAX_ITER;
    case fpif::SolveStatus::kDiverged:
      return FPIF_SOLVE_DIVERGED;
  }
  return FPIF_SOLVE_DIVERGED;
}

long fpif_result_iterations(const fpif_result* result) {
  return result ? result->report.iterations : 0;
}

double fpif_result_residual(const fpif_result* result) {
  return result ? result->report.residual : 0.0;
}

const char* fpif_result_report_json(const fpif_result* result) {
  return result ? result->report.report_json.c_str() : "";
}

const char* fpif_result_solution_path(const fpif_result* result) {
  return result ? result->solution_path.c_str() : "";
}

const char* fpif_result_trace_path(const fpif_result* result) {
  return result ? result->trace_path.c_str() : "";
}

const char* fpif_result_report_path(const fpif_result* result) {
  return result ? result->report_path.c_str() : "";
}

fpif_status fpif_result_component(const fpif_result* result, const char* name,
                                  double* buffer, size_t capacity,
                                  size_t* length) {
  if (!result || !name || !length) return fail(FPIF_ERR_ARGUMENT, "null argument");
  const fpif::Vector* v = result->report.solution.find(name);
  if (!v) {
    return fail(FPIF_ERR_ARGUMENT,
                std::string("no solution component \"") + name + "\"");
  }
  *length = static_cast<size_t>(v->size());
  if (buffer) {
    const size_t n = capacity < *length ? capacity : *length;
    for (size_t i = 0; i < n; ++i) buffer[i] = (*v)(static_cast<fpif::Index>(i));
  }
  g_last_error.clear();
  return FPIF_OK;
}

fpif_status fpif_result_residual_named(const fpif_result* result,
                                       const char* name, double* value) {
  if (!result || !name || !value) return fail(FPIF_ERR_ARGUMENT, "null argument");
  for (const auto& [k, v] : result->report.residuals) {
    if (k == name) {
      *value = v;
      g_last_error.clear();
      return FPIF_OK;
    }
  }
  return fail(FPIF_ERR_ARGUMENT, std::string("no residual \"") + name + "\"");
}

fpif_status fpif_verify(const char* solution_path, const fpif_problem* problem,
                        char** json_out) {
  if (!solution_path || !problem || !json_out) {
    return fail(FPIF_ERR_ARGUMENT, "null argument");
  }
  *json_out = nullptr;
  return guard([&] {
    const auto sol = fpif::runner::read_solution(solution_path);
    const auto res = fpif::runner::evaluate(problem->cfg, sol);
    *json_out = copy_string(fpif::runner::residuals_json(res));
  });
}

void fpif_string_free(char* s) { std::free(s); }

}  // extern "C"
