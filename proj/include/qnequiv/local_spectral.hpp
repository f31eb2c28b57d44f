// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QNEQUIV_LOCAL_SPECTRAL_HPP
#define QNEQUIV_LOCAL_SPECTRAL_HPP

#include <vector>

#include "qnequiv/calibration.hpp"
#include "qnequiv/equivalence.hpp"
#include "qnequiv/linalg.hpp"

namespace qnequiv {

inline constexpr double kDefaultSupportTol = 1e-8;

// Every operator on a finite-dimensional space has the single-valued
// extension property, so the local resolvent below is unique and the local
// resolvent set is the complement of the support.
struct LocalSpectrum {
  std::vector<std::size_t> clusters;  // indices into the decomposition of T
  std::vector<Complex> support;       // cluster representatives, sorted
  std::vector<double> component_norms;  // ||P_i x|| for every cluster of T
  static constexpr bool complement_is_rho = true;

  bool empty() const noexcept { return clusters.empty(); }
};

/// Holds the spectral decomposition of T so repeated local queries reuse it.
class LocalSpectralAnalyzer {
 public:
  explicit LocalSpectralAnalyzer(Matrix t, const EigenOptions& options = {},
                                 double support_tol = kDefaultSupportTol);

  const Matrix& op() const noexcept { return t_; }
  const SpectralDecomposition& decomposition() const noexcept { return dec_; }
  double support_tol() const noexcept { return support_tol_; }

  LocalSpectrum local_spectrum(const Vector& x) const;

  /// x~(lambda): the analytic solution of (lambda I - T) f = x, defined off
  /// the local spectrum. Throws LocalSpectrumHit.
  Vector local_resolvent(const Vector& x, Complex lambda) const;

  /// n-th derivative of x~ at lambda.
  Vector local_resolvent_derivative(const Vector& x, Complex lambda, std::size_t n) const;

  /// [x~(lambda), x~'(lambda)/1!, ..., x~^(n)(lambda)/n!] with the sign
  /// (-1)^k folded in, i.e. R_loc^{k+1} x.
  std::vector<Vector> local_resolvent_powers(const Vector& x, Complex lambda, std::size_t n) const;

 private:
  void check(const Vector& x) const;

  Matrix t_;
  SpectralDecomposition dec_;
  std::vector<Matrix> restricted_;  // B_i* T B_i
  double support_tol_;
};

LocalSpectrum local_spectrum(const Matrix& t, const Vector& x, double support_tol = kDefaultSupportTol,
                             const EigenOptions& options = {});

Vector local_resolvent(const Matrix& t, const Vector& x, Complex lambda, const EigenOptions& options = {});

Vector local_resolvent_derivative(const Matrix& t, const Vector& x, Complex lambda, std::size_t n,
                                  const EigenOptions& options = {});

/// x1(lambda) = sum_n (-1)^n (S - T)^[n] x^(n)(lambda) / n!, which solves
/// (lambda I - S) x1 = x for quasi-nilpotent equivalent T, S. Throws
/// NotEquivalent or LocalSpectrumHit.
Vector transfer_local_resolvent(const Matrix& t, const Matrix& s, const Vector& x, Complex lambda,
                                const Calibration& calibration, std::size_t n_max = 64,
                                const EquivalenceOptions& options = {});

/// Same as above for a caller that has already decided equivalence. The sum
/// stops at the first n with ||(S - T)^[n]|| <= vanish_tol (1 + ||T|| + ||S||)^n.
Vector transfer_local_resolvent(const LocalSpectralAnalyzer& t_local, const Matrix& s, const Vector& x,
                                Complex lambda, std::size_t n_terms, double vanish_tol = kDefaultTolRel);

}  // namespace qnequiv

#endif  // QNEQUIV_LOCAL_SPECTRAL_HPP
