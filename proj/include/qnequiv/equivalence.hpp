// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QNEQUIV_EQUIVALENCE_HPP
#define QNEQUIV_EQUIVALENCE_HPP

#include <vector>

#include "qnequiv/calibration.hpp"
#include "qnequiv/linalg.hpp"

namespace qnequiv {

inline constexpr double kDefaultTolRel = 1e-9;

/// Binomial coefficient as a double. Exact 64-bit arithmetic up to n = 60,
/// arbitrary precision beyond.
double binomial(std::size_t n, std::size_t k);

/// (T - S)^[n] = sum_k (-1)^{n-k} C(n,k) T^k S^{n-k}, summed directly.
Matrix bracket_direct(const Matrix& t, const Matrix& s, std::size_t n);

/// (T - S)^[n] via (T - S)^[k+1] = T (T - S)^[k] - (T - S)^[k] S.
std::vector<Matrix> bracket_terms(const Matrix& t, const Matrix& s, std::size_t n_max);

struct BracketSequence {
  std::vector<Matrix> terms;   // n = 0..n_max
  std::vector<double> norms;   // b_n = max_p phat(terms[n])
  std::vector<double> roots;   // b_n^{1/n}, n >= 1 (roots[0] is b_1)
  /// Worst relative recurrence-vs-direct discrepancy over n <= min(n_max, 12).
  double cross_check = 0.0;
  /// Per seminorm phat of every term, calibration order.
  std::vector<std::vector<double>> seminorm_norms;
};

BracketSequence bracket_sequence(const Matrix& t, const Matrix& s, const Calibration& calibration,
                                 std::size_t n_max);

/// Max-entry residual of sum_k C(n,k) (T - S)^[k] (S - R)^[n-k] - (T - R)^[n].
double convolution_identity_residual(const Matrix& t, const Matrix& s, const Matrix& r, std::size_t n);

struct EquivalenceOptions {
  double tol_rel = kDefaultTolRel;
  EigenOptions eigen;
  /// Oracle agreement threshold: ||D_T - D_S|| <= oracle_tol * (1 + ||T|| + ||S||).
  double oracle_tol = 1e-7;
};

struct EquivalenceVerdict {
  bool equivalent = false;
  std::size_t cutoff = 0;          // n* = 2 dim - 1
  double residual = 0.0;           // max over directions of b_{n*}
  double residual_next = 0.0;      // max over directions of b_{n*+1}
  double scale = 0.0;              // (1 + ||T|| + ||S||)^{n*}
  double threshold = 0.0;          // tol_rel * scale
  bool forward_vanishes = false;   // (T - S)^[n*]
  bool backward_vanishes = false;  // (S - T)^[n*]
  double semisimple_distance = 0.0;
  bool oracle_equivalent = false;
  bool oracle_agrees = false;
  std::vector<double> decay_curve;  // (b_n)^{1/n} of (T - S)^[n], n = 1..n*+2

  /// Decision and oracle disagree: a tolerance cliff, never resolved silently.
  bool flagged() const noexcept { return !oracle_agrees; }
};

EquivalenceVerdict decide_equivalence(const Matrix& t, const Matrix& s, const Calibration& calibration,
                                      const EquivalenceOptions& options = {});

/// sum_n (T - S)^[n] v / (mu - lambda)^{n+1}. With (lambda I - S) v = 0 the
/// result g satisfies (mu I - T) g = v.
Vector bracket_resolvent_series(const Matrix& t, const Matrix& s, Complex lambda, Complex mu, const Vector& v,
                                std::size_t n_max = 512);

struct SeriesConvergenceReport {
  Matrix sum;
  std::vector<Matrix> partial_sums;  // partial_sums[n] = sum_{k<=n} terms[k]
  std::size_t cutoff = 0;
  double cauchy_defect = 0.0;  // max_p phat(partial_m - partial_n), m > n >= n*
  double threshold = 0.0;
  bool cauchy = false;
};

/// Throws NotEquivalent unless decide_equivalence accepts the pair.
SeriesConvergenceReport series_convergence_check(const Matrix& t, const Matrix& s, const Calibration& calibration,
                                                 const EquivalenceOptions& options = {});

}  // namespace qnequiv

#endif  // QNEQUIV_EQUIVALENCE_HPP
