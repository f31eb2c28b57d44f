// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qnequiv {

std::vector<Complex> SpectralReport::qp_values() const {
  std::vector<Complex> out;
  out.reserve(qp_spectrum.size());
  for (const auto& c : qp_spectrum) out.push_back(c.value);
  return out;
}

double radius_exact(const Matrix& t, const Calibration& calibration) {
  require_quotient_bounded(t, calibration, "radius_exact");
  double r = 0.0;
  for (const auto& p : calibration.seminorms()) {
    if (p.rank() == 0) continue;
    r = std::max(r, spectral_radius(compress(t, p)));
  }
  return r;
}

std::vector<double> radius_estimate(const Matrix& t, const Calibration& calibration, std::size_t n_max) {
  if (n_max < 4) fail(ErrorCode::InvalidArgument, "radius_estimate: n_max must be at least 4");
  require_quotient_bounded(t, calibration, "radius_estimate");

  // squares[k] = T^(2^k)
  std::vector<Matrix> squares{t};
  while ((std::size_t{1} << squares.size()) <= n_max) squares.push_back(squares.back() * squares.back());

  std::vector<double> g;
  g.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    Matrix tn = Matrix::identity(t.rows());
    for (std::size_t k = 0; k < squares.size(); ++k) {
      if (n & (std::size_t{1} << k)) tn = tn * squares[k];
    }
    const double norm = tn.all_finite() ? max_phat_unchecked(tn, calibration) : HUGE_VAL;
    if (!std::isfinite(norm)) {
      fail(ErrorCode::Overflow, "radius_estimate: phat(T^n) overflowed at n = " + std::to_string(n) +
                                    "; largest computed n = " + std::to_string(n - 1));
    }
    g.push_back(std::pow(norm, 1.0 / static_cast<double>(n)));
  }
  return g;
}

NeumannResult neumann_inverse(const Matrix& t, const Calibration& calibration, double tol) {
  const double r = radius_exact(t, calibration);
  if (r >= 1.0 - 1e-9) {
    fail(ErrorCode::RadiusNotLessThanOne,
         "neumann_inverse: radius of boundedness " + format_number(r) + " is not below 1");
  }
  const std::size_t n = t.rows();
  constexpr std::size_t kMaxTerms = 200000;

  NeumannResult out;
  Matrix tn = t;
  for (std::size_t k = 1; k <= kMaxTerms; ++k) {
    const double g = std::pow(max_phat_unchecked(tn, calibration), 1.0 / static_cast<double>(k));
    if (g < 1.0) {
      out.certificate_order = k;
      out.contraction = g;
      break;
    }
    tn = tn * t;
  }
  if (out.certificate_order == 0) {
    fail(ErrorCode::NoConvergence, "neumann_inverse: no contraction certificate found");
  }

  const double stop = tol * (1.0 - out.contraction);
  Matrix sum = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  std::size_t terms = 1;
  while (true) {
    term = term * t;
    if (max_phat_unchecked(term, calibration) <= stop) break;
    sum += term;
    if (++terms > kMaxTerms) fail(ErrorCode::NoConvergence, "neumann_inverse: series did not reach tolerance");
  }
  out.terms = terms;
  Matrix residual = (Matrix::identity(n) - t) * sum;
  residual -= Matrix::identity(n);
  out.residual = max_phat_unchecked(residual, calibration);
  out.inverse = std::move(sum);
  return out;
}

Matrix resolvent(const Matrix& t, Complex lambda) {
  if (!t.square()) fail(ErrorCode::DimensionMismatch, "resolvent: operator not square");
  const Matrix eye = Matrix::identity(t.rows());
  Matrix shifted = lambda * eye;
  shifted -= t;
  try {
    return solve(shifted, eye, kSpectrumHitTol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    fail(ErrorCode::SpectrumHit, "resolvent: lambda = (" + format_number(lambda.real()) + ", " +
                                     format_number(lambda.imag()) + ") is in the spectrum");
  }
}

Matrix resolvent_derivative(const Matrix& t, Complex lambda, std::size_t n) {
  const Matrix r = resolvent(t, lambda);
  double factor = 1.0;
  for (std::size_t k = 2; k <= n; ++k) factor *= static_cast<double>(k);
  if (n % 2 == 1) factor = -factor;
  Matrix out = power(r, n + 1);
  out *= factor;
  return out;
}

SpectralReport qp_spectrum(const Matrix& t, const Calibration& calibration, const EigenOptions& options) {
  require_quotient_bounded(t, calibration, "qp_spectrum");
  SpectralReport report;
  const SpectralDecomposition ambient = eigendecompose(t, options);
  report.ambient_spectrum = ambient.eigenvalues;

  std::vector<Complex> points;
  std::vector<std::size_t> owner;
  for (std::size_t k = 0; k < calibration.size(); ++k) {
    const Seminorm& p = calibration[k];
    double rho = 0.0;
    if (p.rank() > 0) {
      for (const auto& z : eigenvalues(compress(t, p))) {
        points.push_back(z);
        owner.push_back(k);
        rho = std::max(rho, std::abs(z));
      }
    }
    report.per_seminorm_radii.emplace_back(p.name(), rho);
    report.radius_of_boundedness = std::max(report.radius_of_boundedness, rho);
  }

  const std::vector<std::size_t> ids = cluster_points(points, ambient.cluster_tol);
  const std::size_t clusters = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  std::vector<Complex> sums(clusters, 0.0);
  std::vector<std::size_t> counts(clusters, 0);
  std::vector<std::vector<bool>> contributes(clusters, std::vector<bool>(calibration.size(), false));
  for (std::size_t i = 0; i < points.size(); ++i) {
    sums[ids[i]] += points[i];
    counts[ids[i]] += 1;
    contributes[ids[i]][owner[i]] = true;
  }
  for (std::size_t c = 0; c < clusters; ++c) {
    SpectrumCluster cluster;
    cluster.value = sums[c] / static_cast<double>(counts[c]);
    for (std::size_t k = 0; k < calibration.size(); ++k) {
      if (contributes[c][k]) cluster.seminorms.push_back(calibration[k].name());
    }
    report.qp_spectrum.push_back(std::move(cluster));
  }
  return report;
}

ResolventLimitReport resolvent_limits_check(const Matrix& t, const Calibration& calibration,
                                            const std::vector<double>& radii) {
  const double r_p = radius_exact(t, calibration);
  ResolventLimitReport report;
  const Matrix eye = Matrix::identity(t.rows());
  for (double radius : radii) {
    if (!(radius > 1.1 * r_p)) {
      fail(ErrorCode::InvalidArgument, "resolvent_limits_check: radius " + format_number(radius) +
                                           " does not exceed 1.1 * r_P(T)");
    }
    ResolventLimitRow row;
    row.radius = radius;
    constexpr int kSamples = 16;
    for (int k = 0; k < kSamples; ++k) {
      const Complex lambda = std::polar(radius, 2.0 * std::numbers::pi * k / kSamples);
      const Matrix r = resolvent(t, lambda);
      row.max_resolvent = std::max(row.max_resolvent, max_phat_unchecked(r, calibration));
      // R(1, T / lambda) = lambda R(lambda, T)
      Matrix deviation = lambda * r;
      deviation -= eye;
      row.max_deviation = std::max(row.max_deviation, max_phat_unchecked(deviation, calibration));
    }
    report.rows.push_back(row);
  }
  std::vector<std::size_t> order(report.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return report.rows[a].radius < report.rows[b].radius; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = report.rows[order[k - 1]];
    const auto& cur = report.rows[order[k]];
    if (cur.max_resolvent > prev.max_resolvent || cur.max_deviation > prev.max_deviation) {
      report.decreasing = false;
    }
  }
  return report;
}

}  // namespace qnequiv
