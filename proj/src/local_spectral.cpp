// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv/local_spectral.hpp"

#include <algorithm>
#include <cmath>

#include "qnequiv/spectral.hpp"

namespace qnequiv {

LocalSpectralAnalyzer::LocalSpectralAnalyzer(Matrix t, const EigenOptions& options, double support_tol)
    : t_(std::move(t)), dec_(eigendecompose(t_, options)), support_tol_(support_tol) {
  restricted_.reserve(dec_.cluster_count());
  for (const auto& basis : dec_.subspace_bases) restricted_.push_back(basis.adjoint() * (t_ * basis));
}

void LocalSpectralAnalyzer::check(const Vector& x) const {
  if (x.dim() != t_.rows()) {
    fail(ErrorCode::DimensionMismatch, "local spectral: vector of dimension " + std::to_string(x.dim()) +
                                           ", operator of dimension " + std::to_string(t_.rows()));
  }
}

LocalSpectrum LocalSpectralAnalyzer::local_spectrum(const Vector& x) const {
  check(x);
  LocalSpectrum out;
  const double x_norm = norm2(x);
  for (std::size_t i = 0; i < dec_.cluster_count(); ++i) {
    const double component = norm2(dec_.projections[i] * x);
    out.component_norms.push_back(component);
    if (x_norm > 0.0 && component > support_tol_ * x_norm) {
      out.clusters.push_back(i);
      out.support.push_back(dec_.eigenvalues[i]);
    }
  }
  return out;
}

std::vector<Vector> LocalSpectralAnalyzer::local_resolvent_powers(const Vector& x, Complex lambda,
                                                                 std::size_t n) const {
  const LocalSpectrum sigma = local_spectrum(x);
  const std::size_t dim = t_.rows();
  std::vector<Vector> out(n + 1, Vector(dim));
  for (std::size_t i : sigma.clusters) {
    if (std::abs(lambda - dec_.eigenvalues[i]) <= dec_.cluster_tol) {
      fail(ErrorCode::LocalSpectrumHit, "local resolvent: lambda lies in the local spectrum");
    }
    const Matrix& basis = dec_.subspace_bases[i];
    const std::size_t m = basis.cols();
    Matrix shifted = lambda * Matrix::identity(m);
    shifted -= restricted_[i];
    Vector coeff = basis.adjoint() * (dec_.projections[i] * x);
    for (std::size_t k = 0; k <= n; ++k) {
      try {
        coeff = solve(shifted, coeff, kSpectrumHitTol);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularMatrix) throw;
        fail(ErrorCode::LocalSpectrumHit, "local resolvent: lambda lies in the local spectrum");
      }
      out[k] += basis * coeff;
    }
  }
  return out;
}

Vector LocalSpectralAnalyzer::local_resolvent(const Vector& x, Complex lambda) const {
  return local_resolvent_powers(x, lambda, 0).front();
}

Vector LocalSpectralAnalyzer::local_resolvent_derivative(const Vector& x, Complex lambda, std::size_t n) const {
  Vector out = local_resolvent_powers(x, lambda, n).back();
  double factor = 1.0;
  for (std::size_t k = 2; k <= n; ++k) factor *= static_cast<double>(k);
  out *= (n % 2 == 1) ? -factor : factor;
  return out;
}

LocalSpectrum local_spectrum(const Matrix& t, const Vector& x, double support_tol, const EigenOptions& options) {
  return LocalSpectralAnalyzer(t, options, support_tol).local_spectrum(x);
}

Vector local_resolvent(const Matrix& t, const Vector& x, Complex lambda, const EigenOptions& options) {
  return LocalSpectralAnalyzer(t, options).local_resolvent(x, lambda);
}

Vector local_resolvent_derivative(const Matrix& t, const Vector& x, Complex lambda, std::size_t n,
                                  const EigenOptions& options) {
  return LocalSpectralAnalyzer(t, options).local_resolvent_derivative(x, lambda, n);
}

Vector transfer_local_resolvent(const LocalSpectralAnalyzer& t_local, const Matrix& s, const Vector& x,
                                Complex lambda, std::size_t n_terms, double vanish_tol) {
  const Matrix& t = t_local.op();
  if (!s.square() || s.rows() != t.rows()) {
    fail(ErrorCode::DimensionMismatch, "transfer_local_resolvent: operators must share a dimension");
  }
  // (-1)^n x^(n) / n! = R_loc^{n+1} x
  const std::vector<Vector> powers = t_local.local_resolvent_powers(x, lambda, n_terms);
  const std::vector<Matrix> brackets = bracket_terms(s, t, n_terms);
  // Once a bracket vanishes all later ones do too; past that point the
  // computed terms are rounding noise that the resolvent powers amplify.
  const double base = 1.0 + spectral_norm(t) + spectral_norm(s);
  Vector out(t.rows());
  double scale = 1.0;
  for (std::size_t n = 0; n <= n_terms; ++n) {
    if (n > 0 && spectral_norm(brackets[n]) <= vanish_tol * scale) break;
    out += brackets[n] * powers[n];
    scale *= base;
  }
  return out;
}

Vector transfer_local_resolvent(const Matrix& t, const Matrix& s, const Vector& x, Complex lambda,
                                const Calibration& calibration, std::size_t n_max,
                                const EquivalenceOptions& options) {
  const EquivalenceVerdict verdict = decide_equivalence(t, s, calibration, options);
  if (!verdict.equivalent) {
    fail(ErrorCode::NotEquivalent, "transfer_local_resolvent: operators are not quasi-nilpotent equivalent");
  }
  const LocalSpectralAnalyzer analyzer(t, options.eigen);
  return transfer_local_resolvent(analyzer, s, x, lambda, std::min(n_max, verdict.cutoff), options.tol_rel);
}

}  // namespace qnequiv
