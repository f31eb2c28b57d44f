// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QNEQUIV_LINALG_HPP
#define QNEQUIV_LINALG_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qnequiv/error.hpp"

namespace qnequiv {

using Complex = std::complex<double>;

class Vector;

/// Dense complex matrix, row-major storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix diagonal(std::span<const Complex> values);
  static Matrix column(const Vector& v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  bool all_finite() const noexcept;

  Matrix adjoint() const;
  Matrix block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const;
  void set_block(std::size_t row, std::size_t col, const Matrix& b);
  Vector col(std::size_t j) const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(Complex s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim) : data_(dim) {}
  explicit Vector(std::vector<Complex> entries) : data_(std::move(entries)) {}
  Vector(std::initializer_list<Complex> entries) : data_(entries) {}

  static Vector unit(std::size_t dim, std::size_t k);

  std::size_t dim() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<const Complex> entries() const noexcept { return data_; }
  bool all_finite() const noexcept;

  Vector& operator+=(const Vector& rhs);
  Vector& operator-=(const Vector& rhs);
  Vector& operator*=(Complex s);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(Complex s, Matrix m);
Vector operator*(const Matrix& m, const Vector& v);
Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator*(Complex s, Vector v);

Matrix power(const Matrix& m, std::size_t n);

double norm2(const Vector& v);
double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);

/// Largest singular value estimated by power iteration on A*A.
/// This is the scale used by every tolerance in the library.
double spectral_norm(const Matrix& m, int iterations = 30);

/// Solves A X = B by LU with partial pivoting. Throws SingularMatrix when a
/// pivot falls below singular_tol * spectral_norm(A).
Matrix solve(const Matrix& a, const Matrix& b, double singular_tol = 1e-12);
Vector solve(const Matrix& a, const Vector& b, double singular_tol = 1e-12);

struct Svd {
  Matrix u;                   // m x k, k = min(m, n)
  std::vector<double> sigma;  // k values, descending
  Matrix v;                   // n x n, columns k.. span the null space

  std::size_t rank(double rank_tol = 1e-10) const;
  /// Orthonormal basis of the numerical null space (n x (n - rank)).
  Matrix null_space(double rank_tol = 1e-10) const;
};

/// One-sided Jacobi SVD.
Svd svd(const Matrix& a);

struct Schur {
  Matrix q;  // unitary
  Matrix t;  // upper triangular, a = q t q*
};

/// Complex Schur form via Householder Hessenberg reduction and shifted QR.
/// Triangular input returns immediately with q = I.
Schur schur(const Matrix& a);

/// Diagonal of the Schur form, in the order produced by the QR sweep.
std::vector<Complex> eigenvalues(const Matrix& a);

double spectral_radius(const Matrix& a);

/// Modified Gram-Schmidt with reorthogonalization.
Matrix orthonormalize(const Matrix& a);

enum class ProjectionMethod { Contour, BlockDiagonal };

struct EigenOptions {
  /// Values <= 0 select the default 1e-7 * (1 + ||T||).
  double cluster_tol = 0.0;
  ProjectionMethod method = ProjectionMethod::Contour;
  std::size_t quadrature_nodes = 64;
};

struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;        // one representative per cluster, sorted
  std::vector<std::size_t> multiplicities;
  std::vector<Matrix> projections;         // Riesz projections
  std::vector<Matrix> subspace_bases;      // orthonormal columns spanning range(P_i)
  double cluster_tol = 0.0;

  std::size_t dim() const noexcept;
  std::size_t cluster_count() const noexcept { return eigenvalues.size(); }
};

double default_cluster_tol(const Matrix& t);

SpectralDecomposition eigendecompose(const Matrix& t, const EigenOptions& options = {});

/// D = sum_i lambda_i P_i, the diagonalizable part of the Jordan-Chevalley
/// decomposition.
Matrix semisimple_part(const Matrix& t, const EigenOptions& options = {});

/// Single-linkage clustering of complex points; returns cluster id per point,
/// clusters numbered in order of their lexicographically smallest mean.
std::vector<std::size_t> cluster_points(std::span<const Complex> points, double tol);

/// Lexicographic (real, then imaginary) ordering.
bool complex_less(const Complex& a, const Complex& b) noexcept;

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace qnequiv

#endif  // QNEQUIV_LINALG_HPP
