// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qnequiv.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static qn_matrix* real2(double a, double b, double c, double d) {
  const double data[8] = {a, 0, b, 0, c, 0, d, 0};
  qn_matrix* m = NULL;
  EXPECT(qn_matrix_create(2, 2, data, &m) == QN_OK);
  return m;
}

static void test_matrices(void) {
  qn_matrix* m = real2(1, 2, 3, 4);
  size_t rows = 0, cols = 0;
  EXPECT(qn_matrix_dims(m, &rows, &cols) == QN_OK);
  EXPECT(rows == 2 && cols == 2);
  double out[8];
  EXPECT(qn_matrix_data(m, out) == QN_OK);
  EXPECT(out[2] == 2.0 && out[6] == 4.0);
  qn_matrix_free(m);

  EXPECT(qn_matrix_create(2, 2, NULL, &m) == QN_ERR_NULL_ARGUMENT);
  EXPECT(strlen(qn_last_error()) > 0);
  EXPECT(strcmp(qn_status_name(QN_ERR_NOT_EQUIVALENT), "NotEquivalent") == 0);
  EXPECT(qn_status_exit_code(QN_OK) == 0);
  EXPECT(qn_status_exit_code(QN_ERR_NOT_EQUIVALENT) == 2);
  EXPECT(qn_status_exit_code(QN_ERR_PARSE) == 3);
  EXPECT(qn_status_exit_code(QN_ERR_CLUSTER_SEPARATION) == 4);
  EXPECT(strlen(qn_version()) > 0);
}

static void test_analysis(void) {
  qn_calibration* e = NULL;
  EXPECT(qn_calibration_euclidean(2, &e) == QN_OK);
  EXPECT(qn_calibration_size(e) == 1);
  EXPECT(qn_calibration_separating(e) == 1);

  qn_matrix* jordan = real2(1, 1, 0, 1);
  qn_matrix* eye = NULL;
  EXPECT(qn_matrix_identity(2, &eye) == QN_OK);

  double phat = 0.0;
  EXPECT(qn_phat(jordan, e, 0, &phat) == QN_OK);
  EXPECT(fabs(phat - 1.6180339887498949) < 1e-12);
  double r = 0.0;
  EXPECT(qn_radius_exact(jordan, e, &r) == QN_OK);
  EXPECT(fabs(r - 1.0) < 1e-12);

  qn_verdict v;
  EXPECT(qn_decide_equivalence(jordan, eye, e, 0.0, &v) == QN_OK);
  EXPECT(v.equivalent == 1 && v.oracle_agrees == 1 && v.cutoff == 3);

  qn_matrix* d12 = real2(1, 0, 0, 2);
  qn_matrix* d21 = real2(2, 0, 0, 1);
  EXPECT(qn_decide_equivalence(d12, d21, e, 0.0, &v) == QN_OK);
  EXPECT(v.equivalent == 0 && v.oracle_agrees == 1);

  qn_matrix* half = real2(0.5, 0.1, 0, 0.5);
  qn_matrix* inv = NULL;
  double residual = 1.0;
  EXPECT(qn_neumann_inverse(half, e, 1e-12, &inv, &residual) == QN_OK);
  EXPECT(residual <= 1e-9);
  double data[8];
  EXPECT(qn_matrix_data(inv, data) == QN_OK);
  EXPECT(fabs(data[0] - 2.0) < 1e-9 && fabs(data[2] - 0.4) < 1e-9);
  qn_matrix_free(inv);
  inv = NULL;
  EXPECT(qn_neumann_inverse(jordan, e, 1e-12, &inv, &residual) == QN_ERR_RADIUS_NOT_LESS_THAN_ONE);
  EXPECT(inv == NULL);

  qn_matrix* res = NULL;
  EXPECT(qn_resolvent(jordan, 1.0, 0.0, &res) == QN_ERR_SPECTRUM_HIT);
  EXPECT(qn_resolvent(jordan, 2.0, 0.0, &res) == QN_OK);
  EXPECT(qn_matrix_data(res, data) == QN_OK);
  EXPECT(fabs(data[0] - 1.0) < 1e-15 && fabs(data[2] - 1.0) < 1e-15);
  qn_matrix_free(res);

  qn_matrix* ss = NULL;
  EXPECT(qn_semisimple_part(jordan, 0.0, &ss) == QN_OK);
  EXPECT(qn_matrix_data(ss, data) == QN_OK);
  EXPECT(fabs(data[0] - 1.0) < 1e-10 && fabs(data[2]) < 1e-10 && fabs(data[6] - 1.0) < 1e-10);
  qn_matrix_free(ss);

  /* Coordinate calibration: the shift is not quotient bounded. */
  const double row1[4] = {1, 0, 0, 0};
  const double row2[4] = {0, 0, 1, 0};
  qn_matrix* p1 = NULL;
  qn_matrix* p2 = NULL;
  EXPECT(qn_matrix_create(1, 2, row1, &p1) == QN_OK);
  EXPECT(qn_matrix_create(1, 2, row2, &p2) == QN_OK);
  const char* names[2] = {"p1", "p2"};
  const qn_matrix* defining[2] = {p1, p2};
  qn_calibration* coords = NULL;
  EXPECT(qn_calibration_create(2, 2, names, defining, 0, &coords) == QN_OK);
  qn_calibration* degenerate = NULL;
  EXPECT(qn_calibration_create(2, 1, names, defining, 0, &degenerate) == QN_ERR_VALIDATION);
  qn_matrix* shift = real2(0, 1, 0, 0);
  int bounded = 1;
  EXPECT(qn_is_quotient_bounded(shift, coords, &bounded) == QN_OK);
  EXPECT(bounded == 0);
  EXPECT(qn_radius_exact(shift, coords, &r) == QN_ERR_NOT_QUOTIENT_BOUNDED);

  qn_matrix* three = NULL;
  EXPECT(qn_matrix_identity(3, &three) == QN_OK);
  EXPECT(qn_decide_equivalence(three, eye, e, 0.0, &v) == QN_ERR_DIMENSION_MISMATCH);

  qn_matrix_free(three);
  qn_matrix_free(shift);
  qn_calibration_free(coords);
  qn_matrix_free(p1);
  qn_matrix_free(p2);
  qn_matrix_free(half);
  qn_matrix_free(d12);
  qn_matrix_free(d21);
  qn_matrix_free(jordan);
  qn_matrix_free(eye);
  qn_calibration_free(e);
}

static void test_scenarios(void) {
  qn_scenario* s = NULL;
  EXPECT(qn_scenario_load(QNEQUIV_FIXTURES "/jordan_identity.json", &s) == QN_OK);
  qn_options o;
  qn_options_init(&o);
  o.format = "json";
  const char* args[2] = {"T", "S"};
  qn_report* rep = NULL;
  EXPECT(qn_run_command("equiv", 2, args, s, &o, &rep) == QN_OK);
  EXPECT(qn_report_exit_code(rep) == 0);
  EXPECT(strstr(qn_report_output(rep), "\"verdict\": \"equivalent\"") != NULL);
  qn_report_free(rep);
  qn_scenario_free(s);

  EXPECT(qn_scenario_load(QNEQUIV_FIXTURES "/malformed.json", &s) == QN_ERR_PARSE);
  EXPECT(qn_scenario_load(QNEQUIV_FIXTURES "/non_separating.json", &s) == QN_ERR_VALIDATION);
  EXPECT(qn_scenario_generate(1, 3, "nope", &s) == QN_ERR_UNKNOWN_KIND);

  /* Generated scenario round-trips through text. */
  EXPECT(qn_scenario_generate(1, 3, "shared-semisimple", &s) == QN_OK);
  char* text = NULL;
  EXPECT(qn_scenario_serialize(s, &text) == QN_OK);
  qn_scenario* back = NULL;
  EXPECT(qn_scenario_parse(text, &back) == QN_OK);
  char* again = NULL;
  EXPECT(qn_scenario_serialize(back, &again) == QN_OK);
  EXPECT(strcmp(text, again) == 0);
  qn_string_free(text);
  qn_string_free(again);
  qn_scenario_free(back);

  qn_options_init(&o);
  EXPECT(qn_run_command("equiv", 2, args, s, &o, &rep) == QN_OK);
  EXPECT(qn_report_exit_code(rep) == 0);
  qn_report_free(rep);
  qn_scenario_free(s);

  /* Library errors travel through the report, not the status. */
  EXPECT(qn_scenario_load(QNEQUIV_FIXTURES "/swapped_diagonal.json", &s) == QN_OK);
  EXPECT(qn_run_command("equiv", 2, args, s, &o, &rep) == QN_OK);
  EXPECT(qn_report_exit_code(rep) == 2);
  EXPECT(strstr(qn_report_diagnostics(rep), "NotEquivalent") != NULL);
  qn_report_free(rep);
  qn_scenario_free(s);

  o.seed = 4;
  o.dim = 2;
  const char* kind[1] = {"nilpotent-pair"};
  EXPECT(qn_run_command("gen", 1, kind, NULL, &o, &rep) == QN_OK);
  EXPECT(qn_report_exit_code(rep) == 0);
  EXPECT(strstr(qn_report_output(rep), "\"space_dim\": 2") != NULL);
  qn_report_free(rep);
  EXPECT(qn_run_command(NULL, 0, NULL, NULL, &o, &rep) == QN_ERR_NULL_ARGUMENT);
}

int main(void) {
  test_matrices();
  test_analysis();
  test_scenarios();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
