// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QNEQUIV_CALIBRATION_HPP
#define QNEQUIV_CALIBRATION_HPP

#include <string>
#include <vector>

#include "qnequiv/linalg.hpp"

namespace qnequiv {

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultInvarianceTol = 1e-10;

/// p(x) = ||A_p x||_2. The SVD A_p = U S V* gives the quotient X / N^p the
/// coordinates z = V_r* x, in which p(x) = ||S_r z||_2.
class Seminorm {
 public:
  Seminorm(std::string name, Matrix defining_matrix, double rank_tol = kDefaultRankTol);

  const std::string& name() const noexcept { return name_; }
  const Matrix& defining_matrix() const noexcept { return defining_; }
  std::size_t space_dim() const noexcept { return defining_.cols(); }
  std::size_t rank() const noexcept { return weights_.size(); }

  /// rank x n, maps x to quotient coordinates.
  const Matrix& quotient_coords() const noexcept { return coords_; }
  /// Singular values of A_p above the rank cut; the diagonal of M_p.
  const std::vector<double>& weights() const noexcept { return weights_; }
  /// n x (n - rank), orthonormal basis of N^p.
  const Matrix& kernel() const noexcept { return kernel_; }
  double defining_norm() const noexcept { return weights_.empty() ? 0.0 : weights_.front(); }

  double operator()(const Vector& x) const;
  /// ||M_p z||_2 for quotient coordinates z.
  double quotient_norm(const Vector& z) const;
  Vector project(const Vector& x) const { return coords_ * x; }

 private:
  std::string name_;
  Matrix defining_;
  Matrix coords_;
  Matrix kernel_;
  std::vector<double> weights_;
};

double seminorm_eval(const Seminorm& p, const Vector& x);

class Calibration {
 public:
  /// Throws ValidationError for an empty family, mismatched dimensions,
  /// duplicate names, or a non-separating family unless allow_degenerate.
  Calibration(std::size_t space_dim, std::vector<Seminorm> seminorms, bool allow_degenerate = false);

  /// The single Euclidean norm on C^n.
  static Calibration euclidean(std::size_t space_dim);

  std::size_t space_dim() const noexcept { return space_dim_; }
  const std::vector<Seminorm>& seminorms() const noexcept { return seminorms_; }
  std::size_t size() const noexcept { return seminorms_.size(); }
  const Seminorm& operator[](std::size_t i) const { return seminorms_[i]; }
  bool separating() const noexcept { return separating_; }

 private:
  std::size_t space_dim_;
  std::vector<Seminorm> seminorms_;
  bool separating_ = false;
};

/// Rank of the stacked defining matrices equals the space dimension.
bool is_separating(std::size_t space_dim, const std::vector<Seminorm>& seminorms);

struct SeminormCertificate {
  std::string seminorm;
  bool invariant = false;
  double defect = 0.0;     // ||A_p T K_p||
  double threshold = 0.0;  // tol * ||A_p|| * ||T||
  double bound = 0.0;      // c_p = phat(T), valid only when invariant
};

struct QuotientBoundedness {
  bool bounded = false;
  std::vector<SeminormCertificate> certificates;
};

QuotientBoundedness is_quotient_bounded(const Matrix& t, const Calibration& calibration,
                                        double tol = kDefaultInvarianceTol);

bool kernel_invariant(const Matrix& t, const Seminorm& p, double tol = kDefaultInvarianceTol);

struct QuotientOperator {
  std::string seminorm;
  Matrix matrix;  // rank x rank, acting on quotient coordinates
  double norm = 0.0;
};

/// sup { p(Tx) : p(x) <= 1 }. Throws NotQuotientBounded when N^p is not
/// T-invariant.
double phat(const Matrix& t, const Seminorm& p, double tol = kDefaultInvarianceTol);

QuotientOperator induced_operator(const Matrix& t, const Seminorm& p, double tol = kDefaultInvarianceTol);

/// V_r* T V_r without the invariance check. Meaningful only for operators
/// already known to leave N^p invariant (products and brackets of such).
Matrix compress(const Matrix& t, const Seminorm& p);

/// ||M_p compress(T) M_p^{-1}||_2 without the invariance check.
double phat_unchecked(const Matrix& t, const Seminorm& p);

/// max over the calibration of phat_unchecked.
double max_phat_unchecked(const Matrix& t, const Calibration& calibration);

/// Throws NotQuotientBounded naming the first failing seminorm.
void require_quotient_bounded(const Matrix& t, const Calibration& calibration, const char* what,
                              double tol = kDefaultInvarianceTol);

}  // namespace qnequiv

#endif  // QNEQUIV_CALIBRATION_HPP
