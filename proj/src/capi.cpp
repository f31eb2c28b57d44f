// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "qnequiv/calibration.hpp"
#include "qnequiv/equivalence.hpp"
#include "qnequiv/scenario.hpp"
#include "qnequiv/spectral.hpp"

struct qn_matrix {
  qnequiv::Matrix m;
};

struct qn_calibration {
  qnequiv::Calibration c;
};

struct qn_scenario {
  qnequiv::Scenario s;
};

struct qn_report {
  int exit_code;
  std::string output;
  std::string diagnostics;
};

namespace {

thread_local std::string g_last_error;

// qn_status mirrors ErrorCode with an offset of one.
qn_status status_of(qnequiv::ErrorCode code) { return static_cast<qn_status>(static_cast<int>(code) + 1); }

qn_status set_error(qn_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
qn_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return QN_OK;
  } catch (const qnequiv::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(QN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(QN_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(QN_ERR_INTERNAL, "unknown exception");
  }
}

#define QN_REQUIRE(p)                                                   \
  do {                                                                  \
    if ((p) == nullptr) return set_error(QN_ERR_NULL_ARGUMENT, #p " is null"); \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qn_version(void) { return "0.1.0"; }

const char* qn_last_error(void) { return g_last_error.c_str(); }

const char* qn_status_name(qn_status status) {
  switch (status) {
    case QN_OK: return "Ok";
    case QN_ERR_NULL_ARGUMENT: return "NullArgument";
    case QN_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status > QN_OK && status <= QN_ERR_UNKNOWN_KIND) {
    return qnequiv::to_string(static_cast<qnequiv::ErrorCode>(status - 1)).data();
  }
  return "Unknown";
}

int qn_status_exit_code(qn_status status) {
  if (status == QN_OK) return qnequiv::kExitOk;
  if (status == QN_ERR_NULL_ARGUMENT) return qnequiv::kExitValidation;
  if (status > QN_OK && status <= QN_ERR_UNKNOWN_KIND) {
    return qnequiv::exit_code_for(static_cast<qnequiv::ErrorCode>(status - 1));
  }
  return qnequiv::kExitNumerical;
}

void qn_string_free(char* s) { std::free(s); }

qn_status qn_matrix_create(size_t rows, size_t cols, const double* re_im, qn_matrix** out) {
  QN_REQUIRE(out);
  QN_REQUIRE(re_im);
  return guarded([&] {
    std::vector<qnequiv::Complex> entries(rows * cols);
    for (size_t k = 0; k < entries.size(); ++k) entries[k] = {re_im[2 * k], re_im[2 * k + 1]};
    *out = new qn_matrix{qnequiv::Matrix(rows, cols, std::move(entries))};
  });
}

qn_status qn_matrix_identity(size_t n, qn_matrix** out) {
  QN_REQUIRE(out);
  return guarded([&] { *out = new qn_matrix{qnequiv::Matrix::identity(n)}; });
}

void qn_matrix_free(qn_matrix* m) { delete m; }

qn_status qn_matrix_dims(const qn_matrix* m, size_t* rows, size_t* cols) {
  QN_REQUIRE(m);
  QN_REQUIRE(rows);
  QN_REQUIRE(cols);
  *rows = m->m.rows();
  *cols = m->m.cols();
  return QN_OK;
}

qn_status qn_matrix_data(const qn_matrix* m, double* re_im) {
  QN_REQUIRE(m);
  QN_REQUIRE(re_im);
  const auto entries = m->m.entries();
  for (size_t k = 0; k < entries.size(); ++k) {
    re_im[2 * k] = entries[k].real();
    re_im[2 * k + 1] = entries[k].imag();
  }
  return QN_OK;
}

qn_status qn_calibration_create(size_t space_dim, size_t count, const char* const* names,
                                const qn_matrix* const* defining, int allow_degenerate, qn_calibration** out) {
  QN_REQUIRE(out);
  if (count > 0) {
    QN_REQUIRE(names);
    QN_REQUIRE(defining);
  }
  return guarded([&] {
    std::vector<qnequiv::Seminorm> family;
    for (size_t i = 0; i < count; ++i) {
      if (names[i] == nullptr || defining[i] == nullptr) {
        qnequiv::fail(qnequiv::ErrorCode::InvalidArgument, "seminorm " + std::to_string(i) + " is null");
      }
      family.emplace_back(names[i], defining[i]->m);
    }
    *out = new qn_calibration{qnequiv::Calibration(space_dim, std::move(family), allow_degenerate != 0)};
  });
}

qn_status qn_calibration_euclidean(size_t space_dim, qn_calibration** out) {
  QN_REQUIRE(out);
  return guarded([&] { *out = new qn_calibration{qnequiv::Calibration::euclidean(space_dim)}; });
}

void qn_calibration_free(qn_calibration* c) { delete c; }

size_t qn_calibration_size(const qn_calibration* c) { return c ? c->c.size() : 0; }

int qn_calibration_separating(const qn_calibration* c) { return c && c->c.separating() ? 1 : 0; }

qn_status qn_is_quotient_bounded(const qn_matrix* t, const qn_calibration* c, int* bounded) {
  QN_REQUIRE(t);
  QN_REQUIRE(c);
  QN_REQUIRE(bounded);
  return guarded([&] { *bounded = qnequiv::is_quotient_bounded(t->m, c->c).bounded ? 1 : 0; });
}

qn_status qn_phat(const qn_matrix* t, const qn_calibration* c, size_t seminorm, double* out) {
  QN_REQUIRE(t);
  QN_REQUIRE(c);
  QN_REQUIRE(out);
  return guarded([&] {
    if (seminorm >= c->c.size()) qnequiv::fail(qnequiv::ErrorCode::InvalidArgument, "seminorm index out of range");
    *out = qnequiv::phat(t->m, c->c[seminorm]);
  });
}

qn_status qn_radius_exact(const qn_matrix* t, const qn_calibration* c, double* out) {
  QN_REQUIRE(t);
  QN_REQUIRE(c);
  QN_REQUIRE(out);
  return guarded([&] { *out = qnequiv::radius_exact(t->m, c->c); });
}

qn_status qn_neumann_inverse(const qn_matrix* t, const qn_calibration* c, double tol, qn_matrix** inverse,
                             double* residual) {
  QN_REQUIRE(t);
  QN_REQUIRE(c);
  QN_REQUIRE(inverse);
  return guarded([&] {
    qnequiv::NeumannResult res = qnequiv::neumann_inverse(t->m, c->c, tol > 0.0 ? tol : 1e-10);
    if (residual != nullptr) *residual = res.residual;
    *inverse = new qn_matrix{std::move(res.inverse)};
  });
}

qn_status qn_resolvent(const qn_matrix* t, double lambda_re, double lambda_im, qn_matrix** out) {
  QN_REQUIRE(t);
  QN_REQUIRE(out);
  return guarded([&] { *out = new qn_matrix{qnequiv::resolvent(t->m, {lambda_re, lambda_im})}; });
}

qn_status qn_semisimple_part(const qn_matrix* t, double cluster_tol, qn_matrix** out) {
  QN_REQUIRE(t);
  QN_REQUIRE(out);
  return guarded([&] {
    qnequiv::EigenOptions opts;
    opts.cluster_tol = cluster_tol > 0.0 ? cluster_tol : 0.0;
    *out = new qn_matrix{qnequiv::semisimple_part(t->m, opts)};
  });
}

qn_status qn_decide_equivalence(const qn_matrix* t, const qn_matrix* s, const qn_calibration* c, double tol_rel,
                                qn_verdict* out) {
  QN_REQUIRE(t);
  QN_REQUIRE(s);
  QN_REQUIRE(c);
  QN_REQUIRE(out);
  return guarded([&] {
    qnequiv::EquivalenceOptions opts;
    if (tol_rel > 0.0) opts.tol_rel = tol_rel;
    const qnequiv::EquivalenceVerdict v = qnequiv::decide_equivalence(t->m, s->m, c->c, opts);
    out->equivalent = v.equivalent ? 1 : 0;
    out->oracle_agrees = v.oracle_agrees ? 1 : 0;
    out->cutoff = v.cutoff;
    out->residual = v.residual;
    out->threshold = v.threshold;
    out->semisimple_distance = v.semisimple_distance;
  });
}

qn_status qn_scenario_load(const char* path, qn_scenario** out) {
  QN_REQUIRE(path);
  QN_REQUIRE(out);
  return guarded([&] { *out = new qn_scenario{qnequiv::load_scenario(path)}; });
}

qn_status qn_scenario_parse(const char* text, qn_scenario** out) {
  QN_REQUIRE(text);
  QN_REQUIRE(out);
  return guarded([&] { *out = new qn_scenario{qnequiv::parse_scenario(text)}; });
}

qn_status qn_scenario_generate(uint64_t seed, size_t dim, const char* kind, qn_scenario** out) {
  QN_REQUIRE(kind);
  QN_REQUIRE(out);
  return guarded(
      [&] { *out = new qn_scenario{qnequiv::generate_corpus(seed, dim, qnequiv::parse_corpus_kind(kind))}; });
}

qn_status qn_scenario_serialize(const qn_scenario* s, char** out) {
  QN_REQUIRE(s);
  QN_REQUIRE(out);
  return guarded([&] { *out = copy_string(qnequiv::serialize_scenario(s->s)); });
}

void qn_scenario_free(qn_scenario* s) { delete s; }

void qn_options_init(qn_options* o) {
  if (o == nullptr) return;
  o->tol_rel = 0.0;
  o->n_max = 0;
  o->cluster_tol = 0.0;
  o->format = nullptr;
  o->seed = 1;
  o->dim = 3;
  o->timing = 0;
}

qn_status qn_run_command(const char* command, size_t argc, const char* const* argv, const qn_scenario* scenario,
                         const qn_options* options, qn_report** out) {
  QN_REQUIRE(command);
  QN_REQUIRE(out);
  if (argc > 0) QN_REQUIRE(argv);
  return guarded([&] {
    qnequiv::CommandOptions opts;
    if (options != nullptr) {
      if (options->tol_rel > 0.0) opts.tol_rel = options->tol_rel;
      if (options->n_max > 0) opts.n_max = static_cast<std::size_t>(options->n_max);
      if (options->cluster_tol > 0.0) opts.cluster_tol = options->cluster_tol;
      if (options->format != nullptr) opts.format = qnequiv::parse_output_format(options->format);
      opts.seed = options->seed;
      opts.dim = options->dim;
      opts.timing = options->timing != 0;
    }
    std::vector<std::string> args;
    for (size_t i = 0; i < argc; ++i) {
      if (argv[i] == nullptr) qnequiv::fail(qnequiv::ErrorCode::InvalidArgument, "null command argument");
      args.emplace_back(argv[i]);
    }
    qnequiv::CommandResult res =
        qnequiv::run_command(command, args, scenario ? &scenario->s : nullptr, opts);
    *out = new qn_report{res.exit_code, std::move(res.output), std::move(res.diagnostics)};
  });
}

int qn_report_exit_code(const qn_report* r) { return r ? r->exit_code : qnequiv::kExitNumerical; }

const char* qn_report_output(const qn_report* r) { return r ? r->output.c_str() : ""; }

const char* qn_report_diagnostics(const qn_report* r) { return r ? r->diagnostics.c_str() : ""; }

void qn_report_free(qn_report* r) { delete r; }

}  // extern "C"
