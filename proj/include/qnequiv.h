/* Copyright 2026 The qnequiv Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the qnequiv library. All objects are opaque handles owned by
 * the caller and released with the matching *_free function. Every fallible
 * call returns a qn_status; on failure qn_last_error() describes the problem
 * (thread-local, valid until the next call on the same thread).
 *
 * Complex data crosses the boundary as interleaved (re, im) doubles,
 * row-major for matrices.
 */
#ifndef QNEQUIV_H
#define QNEQUIV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QN_API __declspec(dllexport)
#else
#define QN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qn_status {
  QN_OK = 0,
  QN_ERR_DIMENSION_MISMATCH,
  QN_ERR_INVALID_ARGUMENT,
  QN_ERR_SINGULAR_MATRIX,
  QN_ERR_NO_CONVERGENCE,
  QN_ERR_CLUSTER_SEPARATION,
  QN_ERR_NOT_QUOTIENT_BOUNDED,
  QN_ERR_RADIUS_NOT_LESS_THAN_ONE,
  QN_ERR_SPECTRUM_HIT,
  QN_ERR_OVERFLOW,
  QN_ERR_NOT_EQUIVALENT,
  QN_ERR_DIVERGENCE,
  QN_ERR_LOCAL_SPECTRUM_HIT,
  QN_ERR_PARSE,
  QN_ERR_VALIDATION,
  QN_ERR_UNKNOWN_KIND,
  QN_ERR_NULL_ARGUMENT,
  QN_ERR_INTERNAL
} qn_status;

typedef struct qn_matrix qn_matrix;
typedef struct qn_calibration qn_calibration;
typedef struct qn_scenario qn_scenario;
typedef struct qn_report qn_report;

QN_API const char* qn_version(void);
QN_API const char* qn_last_error(void);
QN_API const char* qn_status_name(qn_status status);
/* Process exit code for a status: 0, 2 (analytic negative), 3 (invalid
 * input) or 4 (numerical failure). */
QN_API int qn_status_exit_code(qn_status status);
QN_API void qn_string_free(char* s);

/* ---- matrices ---- */
QN_API qn_status qn_matrix_create(size_t rows, size_t cols, const double* re_im, qn_matrix** out);
QN_API qn_status qn_matrix_identity(size_t n, qn_matrix** out);
QN_API void qn_matrix_free(qn_matrix* m);
QN_API qn_status qn_matrix_dims(const qn_matrix* m, size_t* rows, size_t* cols);
/* Writes 2 * rows * cols doubles. */
QN_API qn_status qn_matrix_data(const qn_matrix* m, double* re_im);

/* ---- calibrations ---- */
QN_API qn_status qn_calibration_create(size_t space_dim, size_t count, const char* const* names,
                                       const qn_matrix* const* defining, int allow_degenerate,
                                       qn_calibration** out);
QN_API qn_status qn_calibration_euclidean(size_t space_dim, qn_calibration** out);
QN_API void qn_calibration_free(qn_calibration* c);
QN_API size_t qn_calibration_size(const qn_calibration* c);
QN_API int qn_calibration_separating(const qn_calibration* c);

/* ---- analysis ---- */
QN_API qn_status qn_is_quotient_bounded(const qn_matrix* t, const qn_calibration* c, int* bounded);
QN_API qn_status qn_phat(const qn_matrix* t, const qn_calibration* c, size_t seminorm, double* out);
QN_API qn_status qn_radius_exact(const qn_matrix* t, const qn_calibration* c, double* out);
QN_API qn_status qn_neumann_inverse(const qn_matrix* t, const qn_calibration* c, double tol, qn_matrix** inverse,
                                    double* residual);
QN_API qn_status qn_resolvent(const qn_matrix* t, double lambda_re, double lambda_im, qn_matrix** out);
/* cluster_tol <= 0 selects the default. */
QN_API qn_status qn_semisimple_part(const qn_matrix* t, double cluster_tol, qn_matrix** out);

typedef struct qn_verdict {
  int equivalent;
  int oracle_agrees;
  size_t cutoff;
  double residual;
  double threshold;
  double semisimple_distance;
} qn_verdict;

/* tol_rel <= 0 selects the default. A verdict is returned even when the
 * oracle disagrees; check oracle_agrees. */
QN_API qn_status qn_decide_equivalence(const qn_matrix* t, const qn_matrix* s, const qn_calibration* c,
                                       double tol_rel, qn_verdict* out);

/* ---- scenarios and commands ---- */
QN_API qn_status qn_scenario_load(const char* path, qn_scenario** out);
QN_API qn_status qn_scenario_parse(const char* text, qn_scenario** out);
QN_API qn_status qn_scenario_generate(uint64_t seed, size_t dim, const char* kind, qn_scenario** out);
QN_API qn_status qn_scenario_serialize(const qn_scenario* s, char** out);
QN_API void qn_scenario_free(qn_scenario* s);

typedef struct qn_options {
  double tol_rel;      /* <= 0: unset */
  int64_t n_max;       /* <= 0: unset */
  double cluster_tol;  /* <= 0: unset */
  const char* format;  /* "text", "csv", "json"; NULL means text */
  uint64_t seed;
  size_t dim;
  int timing;
} qn_options;

QN_API void qn_options_init(qn_options* o);

/* scenario may be NULL for "gen". Library errors are reported through the
 * report's exit code, not the returned status; a non-OK status means the
 * call itself could not run (bad arguments). */
QN_API qn_status qn_run_command(const char* command, size_t argc, const char* const* argv,
                                const qn_scenario* scenario, const qn_options* options, qn_report** out);
QN_API int qn_report_exit_code(const qn_report* r);
QN_API const char* qn_report_output(const qn_report* r);
QN_API const char* qn_report_diagnostics(const qn_report* r);
QN_API void qn_report_free(qn_report* r);

#ifdef __cplusplus
}
#endif

#endif /* QNEQUIV_H */
