// Copyright 2026 The qtmp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the qtmp library. All functions are thread-compatible;
 * qtmp_last_error() is per thread. Operators are passed as row-major
 * arrays of interleaved (re, im) doubles of length 2 * dim * dim. */
#ifndef QTMP_QTMP_H
#define QTMP_QTMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(QTMP_BUILDING_LIBRARY)
#define QTMP_API __attribute__((visibility("default")))
#else
#define QTMP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qtmp_status {
  QTMP_OK = 0,
  QTMP_ERR_INVALID_ARGUMENT = 1,
  QTMP_ERR_PARSE = 2,
  QTMP_ERR_VALIDATION = 3,
  QTMP_ERR_HYPOTHESIS = 4,
  QTMP_ERR_NUMERIC = 5,
  QTMP_ERR_BUFFER_TOO_SMALL = 6,
  QTMP_ERR_INTERNAL = 7
} qtmp_status;

typedef struct qtmp_operator qtmp_operator;
typedef struct qtmp_lindbladian qtmp_lindbladian;
typedef struct qtmp_chain qtmp_chain;
typedef struct qtmp_scenario qtmp_scenario;

typedef struct qtmp_run_options {
  double tol;            /* <= 0 keeps the default */
  uint64_t seed;
  int chain_matrix;      /* chain command: label header + Q rows */
} qtmp_run_options;

QTMP_API const char* qtmp_version(void);
/* Message of the last failing call on this thread ("" if none). */
QTMP_API const char* qtmp_last_error(void);

QTMP_API qtmp_status qtmp_operator_create(size_t dim, const double* re_im, qtmp_operator** out);
QTMP_API void qtmp_operator_destroy(qtmp_operator* op);
QTMP_API size_t qtmp_operator_dim(const qtmp_operator* op);
QTMP_API qtmp_status qtmp_operator_get(const qtmp_operator* op, double* re_im, size_t length);

QTMP_API qtmp_status qtmp_lindbladian_create(const qtmp_operator* hamiltonian, const qtmp_operator* const* kraus,
                                             size_t kraus_count, qtmp_lindbladian** out);
QTMP_API void qtmp_lindbladian_destroy(qtmp_lindbladian* l);
QTMP_API qtmp_status qtmp_lindbladian_apply(const qtmp_lindbladian* l, const qtmp_operator* rho, qtmp_operator** out);
QTMP_API qtmp_status qtmp_propagate(const qtmp_lindbladian* l, const qtmp_operator* rho0, double t, qtmp_operator** out);
QTMP_API qtmp_status qtmp_is_relaxing(const qtmp_lindbladian* l, int* relaxing);
QTMP_API qtmp_status qtmp_steady_state(const qtmp_lindbladian* l, qtmp_operator** out);

/* tol <= 0 uses the library default. */
QTMP_API qtmp_status qtmp_check_db(const qtmp_lindbladian* l, const qtmp_operator* rho, double s, double tol, int* holds,
                                   double* residual);

QTMP_API qtmp_status qtmp_von_neumann_entropy(const qtmp_operator* rho, double* out);
/* *infinite is set to 1 (and *out to 0) when the support condition fails. */
QTMP_API qtmp_status qtmp_relative_entropy(const qtmp_operator* mu, const qtmp_operator* nu, double* out, int* infinite);

/* Two-time measurement of S = -log rho_plus starting from rho0. */
QTMP_API qtmp_status qtmp_mgf(const qtmp_lindbladian* l, const qtmp_operator* rho_plus, const qtmp_operator* rho0,
                              double t, double alpha, int deformed, double* out);
/* Writes at most capacity points; *count receives the support size. */
QTMP_API qtmp_status qtmp_delta_distribution(const qtmp_lindbladian* l, const qtmp_operator* rho_plus,
                                             const qtmp_operator* rho0, double t, double* support,
                                             double* probabilities, size_t capacity, size_t* count);

QTMP_API qtmp_status qtmp_chain_extract(const qtmp_lindbladian* l, const qtmp_operator* rho, const qtmp_operator* rho0,
                                        qtmp_chain** out);
QTMP_API void qtmp_chain_destroy(qtmp_chain* chain);
QTMP_API size_t qtmp_chain_size(const qtmp_chain* chain);
/* states: n labels; rates: n * n row-major. Either may be NULL. */
QTMP_API qtmp_status qtmp_chain_get(const qtmp_chain* chain, double* states, double* rates, size_t n);
QTMP_API qtmp_status qtmp_chain_export_csv(const qtmp_chain* chain, const char* path);

QTMP_API qtmp_status qtmp_scenario_load(const char* path, qtmp_scenario** out);
QTMP_API void qtmp_scenario_destroy(qtmp_scenario* scenario);
QTMP_API void qtmp_run_options_init(qtmp_run_options* options);
/* Returns the process exit code (0, 2, 3, 4, 5). out_path NULL or "" writes
 * to stdout; diagnostics are available through qtmp_last_error(). */
QTMP_API int qtmp_run(const qtmp_scenario* scenario, const char* command, const char* out_path,
                      const qtmp_run_options* options);

#ifdef __cplusplus
}
#endif

#endif /* QTMP_QTMP_H */
