// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QNEQUIV_SPECTRAL_HPP
#define QNEQUIV_SPECTRAL_HPP

#include <string>
#include <utility>
#include <vector>

#include "qnequiv/calibration.hpp"
#include "qnequiv/linalg.hpp"

namespace qnequiv {

/// Solver threshold for resolvent evaluation: pivots below this fraction of
/// ||lambda I - T|| signal a spectrum hit.
inline constexpr double kSpectrumHitTol = 1e-12;

struct SpectrumCluster {
  Complex value;
  std::vector<std::string> seminorms;  // contributing seminorms, calibration order
};

struct SpectralReport {
  std::vector<SpectrumCluster> qp_spectrum;
  std::vector<Complex> ambient_spectrum;  // cluster representatives of T
  double radius_of_boundedness = 0.0;
  /// Infinity is never in the Waelbroeck spectrum of a quotient bounded
  /// operator on a finite-dimensional space: the resolvent is rational and
  /// vanishes at infinity.
  bool regular = true;
  std::vector<std::pair<std::string, double>> per_seminorm_radii;

  std::vector<Complex> qp_values() const;
};

/// max_p rho(T^p).
double radius_exact(const Matrix& t, const Calibration& calibration);

/// g_n = max_p phat(T^n)^{1/n} for n = 1..n_max. Throws Overflow when a
/// power's norm is no longer finite.
std::vector<double> radius_estimate(const Matrix& t, const Calibration& calibration, std::size_t n_max);

struct NeumannResult {
  Matrix inverse;
  std::size_t terms = 0;             // N + 1 summands T^0..T^N
  std::size_t certificate_order = 0;  // n0 with phat(T^n0)^{1/n0} < 1
  double contraction = 0.0;           // g = max_p phat(T^n0)^{1/n0}
  double residual = 0.0;              // max_p phat((I - T) inverse - I)
};

/// Sum of T^n. Throws RadiusNotLessThanOne when radius_exact >= 1 - 1e-9.
NeumannResult neumann_inverse(const Matrix& t, const Calibration& calibration, double tol = 1e-10);

/// (lambda I - T)^{-1}. Throws SpectrumHit.
Matrix resolvent(const Matrix& t, Complex lambda);

/// d^n/dlambda^n R(lambda, T) = (-1)^n n! R(lambda, T)^{n+1}.
Matrix resolvent_derivative(const Matrix& t, Complex lambda, std::size_t n);

SpectralReport qp_spectrum(const Matrix& t, const Calibration& calibration, const EigenOptions& options = {});

struct ResolventLimitRow {
  double radius = 0.0;
  double max_resolvent = 0.0;   // max over samples and seminorms of phat(R(lambda, T))
  double max_deviation = 0.0;   // max of phat(R(1, T / lambda) - I)
};

struct ResolventLimitReport {
  std::vector<ResolventLimitRow> rows;
  bool decreasing = true;
};

/// Samples 16 points on each circle |lambda| = r.
ResolventLimitReport resolvent_limits_check(const Matrix& t, const Calibration& calibration,
                                            const std::vector<double>& radii);

}  // namespace qnequiv

#endif  // QNEQUIV_SPECTRAL_HPP
