/*
 * Copyright 2026 The sphdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SPHDESIGN_SPHDESIGN_H
#define SPHDESIGN_SPHDESIGN_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPHD_BUILDING_LIBRARY)
#define SPHD_API __attribute__((visibility("default")))
#else
#define SPHD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; on failure the message is
 * available from sphd_last_error() on the calling thread. */
typedef enum sphd_status {
  SPHD_OK = 0,
  SPHD_ERR_INVALID_ARGUMENT = 1,
  SPHD_ERR_OUT_OF_RANGE = 2,
  SPHD_ERR_PARSE = 3,
  SPHD_ERR_IO = 4,
  SPHD_ERR_NOT_CONVERGED = 5,
  SPHD_ERR_NUMERICAL = 6,
  SPHD_ERR_INTERNAL = 7
} sphd_status;

typedef struct sphd_kernel sphd_kernel;
typedef struct sphd_points sphd_points;
typedef struct sphd_partition sphd_partition;
typedef struct sphd_report sphd_report;

SPHD_API const char* sphd_version(void);
SPHD_API const char* sphd_status_name(sphd_status status);
/* Message of the last failed call on this thread, "" if none. */
SPHD_API const char* sphd_last_error(void);
/* Strings returned through char** out-parameters are released here. */
SPHD_API void sphd_string_free(char* s);

/* Writes to a temporary file beside path and renames it into place. */
SPHD_API sphd_status sphd_write_file_atomic(const char* path, const char* contents);

/* 0 selects the hardware concurrency. */
SPHD_API sphd_status sphd_set_threads(unsigned threads);
SPHD_API unsigned sphd_threads(void);

/* ---- kernel ---------------------------------------------------------- */

SPHD_API sphd_status sphd_lower_bound(int d, int t, uint64_t* out);
SPHD_API sphd_status sphd_harmonic_dim(int d, int k, uint64_t* out);

SPHD_API sphd_status sphd_kernel_create(int d, int t, sphd_kernel** out);
SPHD_API void sphd_kernel_free(sphd_kernel* k);
SPHD_API int sphd_kernel_dim(const sphd_kernel* k);
SPHD_API int sphd_kernel_degree(const sphd_kernel* k);
/* G(s) and G'(s); either output may be NULL. */
SPHD_API sphd_status sphd_kernel_eval(const sphd_kernel* k, double s, double* g, double* dg);
/* Normalized Gegenbauer polynomial P_deg(s) of the kernel's dimension. */
SPHD_API sphd_status sphd_gegenbauer(const sphd_kernel* k, int deg, double s, double* out);

/* ---- points ---------------------------------------------------------- */

/* coords holds n rows of d+1 values (row-major). */
SPHD_API sphd_status sphd_points_create(int d, size_t n, const double* coords, sphd_points** out);
SPHD_API sphd_status sphd_points_read(const char* path, sphd_points** out);
SPHD_API sphd_status sphd_points_parse(const char* text, sphd_points** out);
/* Atomic write (temporary file and rename). */
SPHD_API sphd_status sphd_points_write(const sphd_points* p, const char* path);
SPHD_API sphd_status sphd_points_format(const sphd_points* p, char** out);
SPHD_API sphd_status sphd_points_catalog(const char* name, sphd_points** out);
SPHD_API sphd_status sphd_catalog_names(char** out); /* newline separated */
/* Equal-area partition representatives; independent of t. */
SPHD_API sphd_status sphd_points_seed(int d, int t, int n, sphd_points** out);
SPHD_API void sphd_points_free(sphd_points* p);
SPHD_API int sphd_points_dim(const sphd_points* p);
SPHD_API size_t sphd_points_size(const sphd_points* p);
/* Copies n*(d+1) values, row-major. */
SPHD_API sphd_status sphd_points_coords(const sphd_points* p, double* out);

/* ---- partition ------------------------------------------------------- */

SPHD_API sphd_status sphd_partition_create(int d, int n, sphd_partition** out);
SPHD_API void sphd_partition_free(sphd_partition* p);
SPHD_API size_t sphd_partition_size(const sphd_partition* p);
SPHD_API sphd_status sphd_partition_norm(const sphd_partition* p, double* out);
SPHD_API sphd_status sphd_partition_cell(const sphd_partition* p, size_t i, double* area, double* diameter);
SPHD_API sphd_status sphd_partition_representatives(const sphd_partition* p, sphd_points** out);
SPHD_API sphd_status sphd_partition_json(const sphd_partition* p, char** out);
/* max over counts of norm * n^(1/d); counts may be NULL for 10..10^4. */
SPHD_API sphd_status sphd_diameter_constant(int d, const int* counts, size_t ncounts, double* out);

/* ---- designs --------------------------------------------------------- */

SPHD_API sphd_status sphd_defect(const sphd_kernel* k, const sphd_points* p, double* out);
/* t values rho_1..rho_t. */
SPHD_API sphd_status sphd_degree_residuals(const sphd_kernel* k, const sphd_points* p, double* out);
/* n*(d+1) values, row i is the tangent gradient at point i. */
SPHD_API sphd_status sphd_defect_gradient(const sphd_kernel* k, const sphd_points* p, double* out);

SPHD_API sphd_status sphd_verify(const sphd_kernel* k, const sphd_points* p, double tolerance, sphd_report** out);
SPHD_API void sphd_report_free(sphd_report* r);
SPHD_API int sphd_report_verdict(const sphd_report* r);
SPHD_API double sphd_report_defect(const sphd_report* r);
/* Adds meta.<key> = value, value being a JSON document. */
SPHD_API sphd_status sphd_report_set_meta(sphd_report* r, const char* key, const char* json_value);
SPHD_API sphd_status sphd_report_json(const sphd_report* r, char** out);

typedef struct sphd_finder_config {
  int d;
  int t;
  int n;
  int max_iterations;
  double defect_target;
  int restarts;
  double perturbation;
  int conjugate_gradient;
  uint64_t seed;
  double initial_step;
  double armijo;
  double shrink;
  double grow;
  double min_step;
} sphd_finder_config;

SPHD_API void sphd_finder_config_init(sphd_finder_config* cfg);
/* The report comes from an independent verification of the returned
 * points. trace_csv may be NULL. Non-convergence is not an error: check
 * sphd_report_verdict. */
SPHD_API sphd_status sphd_find_design(const sphd_finder_config* cfg, sphd_points** points, sphd_report** report,
                                      char** trace_csv);

/* ---- flow ------------------------------------------------------------ */

typedef struct sphd_lemma1_config {
  int d;
  int t;
  int n;
  double r_d;
  int trials;
  uint64_t seed;
  int anchors; /* 0: twice the dimension of P_t */
  int rule_resolution;
  int steps;
  int euler; /* nonzero: projected Euler instead of RK4 */
  double slope_slack;
} sphd_lemma1_config;

SPHD_API void sphd_lemma1_config_init(sphd_lemma1_config* cfg);
SPHD_API sphd_status sphd_lemma1_run(const sphd_lemma1_config* cfg, char** json, int* positive_count);
/* CSV s,average,derivative,maxExcess for one trial (0-based). */
SPHD_API sphd_status sphd_lemma1_trace(const sphd_lemma1_config* cfg, int trial, char** csv);

/* ---- MZ -------------------------------------------------------------- */

typedef struct sphd_mz_config {
  int d;
  int m;
  const int* counts;
  size_t ncounts;
  int trials;
  uint64_t seed;
  int anchors;
  double r_d;
  double rel_tol;
  int max_resolution;
} sphd_mz_config;

SPHD_API void sphd_mz_config_init(sphd_mz_config* cfg);
/* csv: one row per check. summary: JSON with pass counts and ratio ranges.
 * Either output may be NULL. */
SPHD_API sphd_status sphd_mz_sweep(const sphd_mz_config* cfg, char** csv, char** summary);
SPHD_API sphd_status sphd_mz_threshold(int d, int m, int trials, uint64_t seed, int n_lo, int n_hi, char** json);

/* ---- constants ------------------------------------------------------- */

/* Measured B_d, configured r_d, and C_d = (54 d B_d / r_d)^d with the
 * resulting size C_d t^d, as JSON. */
SPHD_API sphd_status sphd_constants(int d, int t, double r_d, char** json);

#ifdef __cplusplus
}
#endif

#endif
