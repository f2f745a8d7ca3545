/* Copyright 2026 The fpif Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libfpif. Problems are loaded from JSON configs; every call
 * returns an fpif_status and, on failure, leaves a message for
 * fpif_last_error() on the calling thread. */

#ifndef FPIF_FPIF_H_
#define FPIF_FPIF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(FPIF_BUILDING_LIBRARY)
#define FPIF_API __attribute__((visibility("default")))
#else
#define FPIF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpif_status {
  FPIF_OK = 0,
  FPIF_ERR_CONFIG = 1,
  FPIF_ERR_DIMENSION = 2,
  FPIF_ERR_UNSUPPORTED = 3,
  FPIF_ERR_NO_CONVERGENCE = 4,
  FPIF_ERR_IO = 5,
  FPIF_ERR_ARGUMENT = 6,
  FPIF_ERR_INTERNAL = 7
} fpif_status;

/* Outcome of a solve. */
typedef enum fpif_solve_status {
  FPIF_SOLVE_CONVERGED = 0,
  FPIF_SOLVE_MAX_ITER = 1,
  FPIF_SOLVE_DIVERGED = 2
} fpif_solve_status;

typedef struct fpif_problem fpif_problem;
typedef struct fpif_result fpif_result;

/* Command-line style overrides; zero-initialize and set the has_ flags. */
typedef struct fpif_overrides {
  int has_max_iter;
  long max_iter;
  int has_tol;
  double tol;
  int has_gamma;
  double gamma;
  int has_seed;
  uint64_t seed;
  const char* out_dir; /* NULL keeps the config's */
} fpif_overrides;

FPIF_API const char* fpif_version(void);

/* Message of the last failed call on this thread ("" if none). */
FPIF_API const char* fpif_last_error(void);

/* overrides may be NULL. */
FPIF_API fpif_status fpif_problem_load(const char* config_path,
                                       const fpif_overrides* overrides,
                                       fpif_problem** out);
/* Same, from a JSON string; relative file references resolve against
 * base_dir (NULL means the working directory). */
FPIF_API fpif_status fpif_problem_parse(const char* json, const char* base_dir,
                                        const fpif_overrides* overrides,
                                        fpif_problem** out);
FPIF_API void fpif_problem_free(fpif_problem* problem);
FPIF_API const char* fpif_problem_kind(const fpif_problem* problem);

/* Solves and writes solution.csv, trace.csv and report.json. */
FPIF_API fpif_status fpif_run(const fpif_problem* problem, fpif_result** out);
FPIF_API void fpif_result_free(fpif_result* result);

FPIF_API fpif_solve_status fpif_result_status(const fpif_result* result);
FPIF_API long fpif_result_iterations(const fpif_result* result);
FPIF_API double fpif_result_residual(const fpif_result* result);
FPIF_API const char* fpif_result_report_json(const fpif_result* result);
FPIF_API const char* fpif_result_solution_path(const fpif_result* result);
FPIF_API const char* fpif_result_trace_path(const fpif_result* result);
FPIF_API const char* fpif_result_report_path(const fpif_result* result);

/* Copies up to capacity entries of a solution component ("x", "y", "x1",
 * "u1", "state", ...) into buffer and stores its full length in *length.
 * buffer may be NULL to query the length. */
FPIF_API fpif_status fpif_result_component(const fpif_result* result,
                                           const char* name, double* buffer,
                                           size_t capacity, size_t* length);

/* Residuals of a named residual entry ("gap", "relative", ...). */
FPIF_API fpif_status fpif_result_residual_named(const fpif_result* result,
                                                const char* name,
                                                double* value);

/* Recomputes residuals of a solution file without iterating. *json_out
 * receives a JSON object to release with fpif_string_free. */
FPIF_API fpif_status fpif_verify(const char* solution_path,
                                 const fpif_problem* problem, char** json_out);

FPIF_API void fpif_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FPIF_FPIF_H_ */
