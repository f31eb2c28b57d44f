// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace qnequiv {

namespace {

void check_pair(const Matrix& t, const Matrix& s, const char* what) {
  if (!t.square() || !s.square() || t.rows() != s.rows()) {
    fail(ErrorCode::DimensionMismatch, std::string(what) + ": operators must be square of equal dimension");
  }
}

std::vector<double> seminorm_max(const std::vector<Matrix>& terms, const Calibration& calibration) {
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto& m : terms) out.push_back(max_phat_unchecked(m, calibration));
  return out;
}

}  // namespace

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 60) {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return static_cast<double>(c);
  }
  boost::multiprecision::cpp_int c = 1;
  for (std::size_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c.convert_to<double>();
}

Matrix bracket_direct(const Matrix& t, const Matrix& s, std::size_t n) {
  check_pair(t, s, "bracket_direct");
  const std::size_t dim = t.rows();
  std::vector<Matrix> t_pow{Matrix::identity(dim)};
  std::vector<Matrix> s_pow{Matrix::identity(dim)};
  for (std::size_t k = 1; k <= n; ++k) {
    t_pow.push_back(t_pow.back() * t);
    s_pow.push_back(s_pow.back() * s);
  }
  Matrix out(dim, dim);
  for (std::size_t k = 0; k <= n; ++k) {
    const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    Matrix term = t_pow[k] * s_pow[n - k];
    term *= sign * binomial(n, k);
    out += term;
  }
  return out;
}

std::vector<Matrix> bracket_terms(const Matrix& t, const Matrix& s, std::size_t n_max) {
  check_pair(t, s, "bracket_terms");
  std::vector<Matrix> terms;
  terms.reserve(n_max + 1);
  terms.push_back(Matrix::identity(t.rows()));
  for (std::size_t n = 0; n < n_max; ++n) terms.push_back(t * terms[n] - terms[n] * s);
  return terms;
}

BracketSequence bracket_sequence(const Matrix& t, const Matrix& s, const Calibration& calibration,
                                 std::size_t n_max) {
  check_pair(t, s, "bracket_sequence");
  require_quotient_bounded(t, calibration, "bracket_sequence");
  require_quotient_bounded(s, calibration, "bracket_sequence");

  BracketSequence seq;
  seq.terms = bracket_terms(t, s, n_max);

  const double base = spectral_norm(t) + spectral_norm(s);
  for (std::size_t n = 0; n <= std::min<std::size_t>(n_max, 12); ++n) {
    const double scale = std::max(1.0, std::pow(base, static_cast<double>(n)));
    const double diff = max_abs(seq.terms[n] - bracket_direct(t, s, n)) / scale;
    seq.cross_check = std::max(seq.cross_check, diff);
  }

  seq.seminorm_norms.assign(calibration.size(), {});
  for (std::size_t k = 0; k < calibration.size(); ++k) {
    for (const auto& term : seq.terms) seq.seminorm_norms[k].push_back(phat_unchecked(term, calibration[k]));
  }
  seq.norms.assign(seq.terms.size(), 0.0);
  for (std::size_t n = 0; n < seq.terms.size(); ++n) {
    for (std::size_t k = 0; k < calibration.size(); ++k) seq.norms[n] = std::max(seq.norms[n], seq.seminorm_norms[k][n]);
  }
  for (std::size_t n = 1; n < seq.norms.size(); ++n) {
    seq.roots.push_back(std::pow(seq.norms[n], 1.0 / static_cast<double>(n)));
  }
  return seq;
}

double convolution_identity_residual(const Matrix& t, const Matrix& s, const Matrix& r, std::size_t n) {
  check_pair(t, s, "convolution_identity_residual");
  check_pair(s, r, "convolution_identity_residual");
  const std::vector<Matrix> ts = bracket_terms(t, s, n);
  const std::vector<Matrix> sr = bracket_terms(s, r, n);
  Matrix lhs(t.rows(), t.cols());
  for (std::size_t k = 0; k <= n; ++k) {
    Matrix term = ts[k] * sr[n - k];
    term *= binomial(n, k);
    lhs += term;
  }
  return max_abs(lhs - bracket_terms(t, r, n).back());
}

EquivalenceVerdict decide_equivalence(const Matrix& t, const Matrix& s, const Calibration& calibration,
                                      const EquivalenceOptions& options) {
  check_pair(t, s, "decide_equivalence");
  require_quotient_bounded(t, calibration, "decide_equivalence");
  require_quotient_bounded(s, calibration, "decide_equivalence");

  EquivalenceVerdict v;
  const std::size_t dim = t.rows();
  v.cutoff = 2 * dim - 1;
  const double t_norm = spectral_norm(t);
  const double s_norm = spectral_norm(s);
  v.scale = std::pow(1.0 + t_norm + s_norm, static_cast<double>(v.cutoff));
  v.threshold = options.tol_rel * v.scale;

  const std::vector<double> forward = seminorm_max(bracket_terms(t, s, v.cutoff + 2), calibration);
  const std::vector<double> backward = seminorm_max(bracket_terms(s, t, v.cutoff + 2), calibration);
  v.forward_vanishes = forward[v.cutoff] <= v.threshold;
  v.backward_vanishes = backward[v.cutoff] <= v.threshold;
  v.equivalent = v.forward_vanishes && v.backward_vanishes;
  v.residual = std::max(forward[v.cutoff], backward[v.cutoff]);
  v.residual_next = std::max(forward[v.cutoff + 1], backward[v.cutoff + 1]);
  for (std::size_t n = 1; n < forward.size(); ++n) {
    v.decay_curve.push_back(std::pow(forward[n], 1.0 / static_cast<double>(n)));
  }

  const Matrix d_t = semisimple_part(t, options.eigen);
  const Matrix d_s = semisimple_part(s, options.eigen);
  v.semisimple_distance = svd(d_t - d_s).sigma.front();
  v.oracle_equivalent = v.semisimple_distance <= options.oracle_tol * (1.0 + t_norm + s_norm);
  v.oracle_agrees = v.oracle_equivalent == v.equivalent;
  return v;
}

Vector bracket_resolvent_series(const Matrix& t, const Matrix& s, Complex lambda, Complex mu, const Vector& v,
                                std::size_t n_max) {
  check_pair(t, s, "bracket_resolvent_series");
  if (v.dim() != t.rows()) fail(ErrorCode::DimensionMismatch, "bracket_resolvent_series: vector dimension");
  if (mu == lambda) fail(ErrorCode::InvalidArgument, "bracket_resolvent_series: mu must differ from lambda");

  const double v_norm = norm2(v);
  Vector sum(v.dim());
  if (v_norm == 0.0) return sum;

  const Complex step = 1.0 / (mu - lambda);
  Matrix bracket = Matrix::identity(t.rows());
  Complex weight = step;
  double previous = HUGE_VAL;
  int growth = 0;
  int small = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const Vector term = weight * (bracket * v);
    sum += term;
    const double term_norm = norm2(term);
    // A single vanishing term is not conclusive: B_n v = 0 does not force B_{n+1} v = 0.
    small = term_norm < 1e-14 * v_norm ? small + 1 : 0;
    if (small >= 3) break;
    growth = term_norm > previous ? growth + 1 : 0;
    if (growth >= 8) {
      fail(ErrorCode::DivergenceDetected,
           "bracket_resolvent_series: term norms grew for 8 consecutive n (n = " + std::to_string(n) + ")");
    }
    previous = term_norm;
    bracket = t * bracket - bracket * s;
    weight *= step;
  }
  return sum;
}

SeriesConvergenceReport series_convergence_check(const Matrix& t, const Matrix& s, const Calibration& calibration,
                                                 const EquivalenceOptions& options) {
  const EquivalenceVerdict verdict = decide_equivalence(t, s, calibration, options);
  if (!verdict.equivalent) {
    fail(ErrorCode::NotEquivalent, "series_convergence_check: operators are not quasi-nilpotent equivalent");
  }
  SeriesConvergenceReport report;
  report.cutoff = verdict.cutoff;
  report.threshold = 1e-10 * verdict.scale;
  const std::vector<Matrix> terms = bracket_terms(t, s, verdict.cutoff + 2);
  Matrix partial(t.rows(), t.cols());
  for (const auto& term : terms) {
    partial += term;
    report.partial_sums.push_back(partial);
  }
  for (std::size_t m = report.cutoff; m < report.partial_sums.size(); ++m) {
    for (std::size_t n = report.cutoff; n < m; ++n) {
      const double d = max_phat_unchecked(report.partial_sums[m] - report.partial_sums[n], calibration);
      report.cauchy_defect = std::max(report.cauchy_defect, d);
    }
  }
  report.cauchy = report.cauchy_defect <= report.threshold;
  report.sum = report.partial_sums.back();
  return report;
}

}  // namespace qnequiv
