// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the test binaries. Eigen serves as an independent
// reference implementation and is never linked into the library.

#ifndef QNEQUIV_TESTS_SUPPORT_HPP
#define QNEQUIV_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "qnequiv/linalg.hpp"

namespace qntest {

using qnequiv::Complex;
using qnequiv::Matrix;
using qnequiv::Vector;

inline Eigen::MatrixXcd to_eigen(const Matrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline Eigen::VectorXcd to_eigen(const Vector& v) {
  Eigen::VectorXcd out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out(i) = v[i];
  return out;
}

inline Matrix from_eigen(const Eigen::MatrixXcd& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline Vector from_eigen(const Eigen::VectorXcd& v) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
  return out;
}

/// Largest singular value, computed by Eigen's two-sided Jacobi SVD.
inline double oracle_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  return svd.singularValues()(0);
}

inline double oracle_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

inline std::vector<Complex> oracle_eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

inline double diff(const Matrix& a, const Matrix& b) { return qnequiv::max_abs(a - b); }

inline double diff(const Vector& a, const Vector& b) { return qnequiv::norm2(a - b); }

inline Matrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<Complex> data;
  std::size_t r = 0;
  std::size_t c = 0;
  for (const auto& row : rows) {
    c = row.size();
    for (double x : row) data.emplace_back(x);
    ++r;
  }
  return Matrix(r, c, std::move(data));
}

inline Matrix diag(std::initializer_list<double> values) {
  std::vector<Complex> v(values.begin(), values.end());
  return Matrix::diagonal(v);
}

}  // namespace qntest

#endif  // QNEQUIV_TESTS_SUPPORT_HPP
