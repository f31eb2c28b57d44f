// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qnequiv {

Seminorm::Seminorm(std::string name, Matrix defining_matrix, double rank_tol)
    : name_(std::move(name)), defining_(std::move(defining_matrix)) {
  if (defining_.rows() == 0 || defining_.cols() == 0) {
    fail(ErrorCode::ValidationError, "seminorm '" + name_ + "': empty defining matrix");
  }
  if (!defining_.all_finite()) {
    fail(ErrorCode::ValidationError, "seminorm '" + name_ + "': non-finite entries");
  }
  const Svd dec = svd(defining_);
  const std::size_t r = dec.rank(rank_tol);
  const std::size_t n = defining_.cols();
  weights_.assign(dec.sigma.begin(), dec.sigma.begin() + static_cast<std::ptrdiff_t>(r));
  coords_ = dec.v.block(0, 0, n, r).adjoint();
  kernel_ = dec.v.block(0, r, n, n - r);
}

double Seminorm::operator()(const Vector& x) const {
  if (x.dim() != space_dim()) {
    fail(ErrorCode::DimensionMismatch, "seminorm '" + name_ + "': vector of dimension " +
                                           std::to_string(x.dim()) + ", expected " +
                                           std::to_string(space_dim()));
  }
  return norm2(defining_ * x);
}

double Seminorm::quotient_norm(const Vector& z) const {
  if (z.dim() != rank()) fail(ErrorCode::DimensionMismatch, "seminorm: quotient coordinate dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < z.dim(); ++i) s += std::norm(weights_[i] * z[i]);
  return std::sqrt(s);
}

double seminorm_eval(const Seminorm& p, const Vector& x) { return p(x); }

bool is_separating(std::size_t space_dim, const std::vector<Seminorm>& seminorms) {
  std::size_t rows = 0;
  for (const auto& p : seminorms) rows += p.defining_matrix().rows();
  Matrix stacked(rows, space_dim);
  std::size_t at = 0;
  for (const auto& p : seminorms) {
    // Normalize each block so one large seminorm cannot mask another's directions.
    Matrix a = p.defining_matrix();
    const double scale = p.defining_norm();
    if (scale > 0.0) a *= 1.0 / scale;
    stacked.set_block(at, 0, a);
    at += a.rows();
  }
  return svd(stacked).rank(kDefaultRankTol) == space_dim;
}

Calibration::Calibration(std::size_t space_dim, std::vector<Seminorm> seminorms, bool allow_degenerate)
    : space_dim_(space_dim), seminorms_(std::move(seminorms)) {
  if (space_dim_ == 0) fail(ErrorCode::ValidationError, "calibration: space dimension must be positive");
  if (seminorms_.empty()) fail(ErrorCode::ValidationError, "calibration: at least one seminorm required");
  std::set<std::string> names;
  for (const auto& p : seminorms_) {
    if (p.space_dim() != space_dim_) {
      fail(ErrorCode::ValidationError, "calibration: seminorm '" + p.name() + "' acts on dimension " +
                                           std::to_string(p.space_dim()) + ", expected " +
                                           std::to_string(space_dim_));
    }
    if (!names.insert(p.name()).second) {
      fail(ErrorCode::ValidationError, "calibration: duplicate seminorm name '" + p.name() + "'");
    }
  }
  separating_ = is_separating(space_dim_, seminorms_);
  if (!separating_ && !allow_degenerate) {
    fail(ErrorCode::ValidationError,
         "calibration: seminorm family is not separating (joint null space is nontrivial)");
  }
}

Calibration Calibration::euclidean(std::size_t space_dim) {
  std::vector<Seminorm> family;
  family.emplace_back("euclidean", Matrix::identity(space_dim));
  return Calibration(space_dim, std::move(family));
}

namespace {

SeminormCertificate invariance(const Matrix& t, const Seminorm& p, double tol, double t_norm) {
  SeminormCertificate cert;
  cert.seminorm = p.name();
  cert.threshold = tol * p.defining_norm() * t_norm;
  if (p.kernel().cols() == 0) {
    cert.invariant = true;
  } else {
    cert.defect = svd(p.defining_matrix() * (t * p.kernel())).sigma.front();
    cert.invariant = cert.defect <= cert.threshold;
  }
  return cert;
}

void check_square(const Matrix& t, std::size_t n, const char* what) {
  if (!t.square() || t.rows() != n) {
    fail(ErrorCode::DimensionMismatch, std::string(what) + ": operator is " + std::to_string(t.rows()) + "x" +
                                           std::to_string(t.cols()) + ", space dimension " +
                                           std::to_string(n));
  }
}

}  // namespace

QuotientBoundedness is_quotient_bounded(const Matrix& t, const Calibration& calibration, double tol) {
  check_square(t, calibration.space_dim(), "is_quotient_bounded");
  QuotientBoundedness out;
  out.bounded = true;
  const double t_norm = spectral_norm(t);
  for (const auto& p : calibration.seminorms()) {
    SeminormCertificate cert = invariance(t, p, tol, t_norm);
    if (cert.invariant) cert.bound = phat_unchecked(t, p);
    out.bounded = out.bounded && cert.invariant;
    out.certificates.push_back(std::move(cert));
  }
  return out;
}

bool kernel_invariant(const Matrix& t, const Seminorm& p, double tol) {
  check_square(t, p.space_dim(), "kernel_invariant");
  return invariance(t, p, tol, spectral_norm(t)).invariant;
}

Matrix compress(const Matrix& t, const Seminorm& p) {
  return p.quotient_coords() * (t * p.quotient_coords().adjoint());
}

double phat_unchecked(const Matrix& t, const Seminorm& p) {
  if (p.rank() == 0) return 0.0;
  Matrix scaled = compress(t, p);
  const auto& w = p.weights();
  for (std::size_t i = 0; i < scaled.rows(); ++i)
    for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= w[i] / w[j];
  return svd(scaled).sigma.front();
}

double max_phat_unchecked(const Matrix& t, const Calibration& calibration) {
  double best = 0.0;
  for (const auto& p : calibration.seminorms()) best = std::max(best, phat_unchecked(t, p));
  return best;
}

double phat(const Matrix& t, const Seminorm& p, double tol) {
  check_square(t, p.space_dim(), "phat");
  const SeminormCertificate cert = invariance(t, p, tol, spectral_norm(t));
  if (!cert.invariant) {
    fail(ErrorCode::NotQuotientBounded, "phat: null space of '" + p.name() + "' is not invariant (defect " +
                                            format_number(cert.defect) + ")");
  }
  return phat_unchecked(t, p);
}

QuotientOperator induced_operator(const Matrix& t, const Seminorm& p, double tol) {
  QuotientOperator q;
  q.seminorm = p.name();
  q.norm = phat(t, p, tol);
  q.matrix = compress(t, p);
  return q;
}

void require_quotient_bounded(const Matrix& t, const Calibration& calibration, const char* what, double tol) {
  check_square(t, calibration.space_dim(), what);
  const double t_norm = spectral_norm(t);
  for (const auto& p : calibration.seminorms()) {
    const SeminormCertificate cert = invariance(t, p, tol, t_norm);
    if (!cert.invariant) {
      fail(ErrorCode::NotQuotientBounded, std::string(what) + ": operator does not leave the null space of '" +
                                              p.name() + "' invariant (defect " + format_number(cert.defect) +
                                              ")");
    }
  }
}

}  // namespace qnequiv
