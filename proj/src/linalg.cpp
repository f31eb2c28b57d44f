// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

namespace qnequiv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + ": shape " + std::to_string(a.rows()) + "x" +
             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
             std::to_string(b.cols()));
  }
}

// Plane rotation G = [c s; -conj(s) c] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s = 0.0;

  static Givens make(Complex a, Complex b) {
    Givens g;
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) return g;
    const double abs_a = std::abs(a);
    if (abs_a == 0.0) {
      g.c = 0.0;
      g.s = std::conj(b) / abs_b;
      return g;
    }
    const double nrm = std::hypot(abs_a, abs_b);
    g.c = abs_a / nrm;
    g.s = (a / abs_a) * std::conj(b) / nrm;
    return g;
  }

  // rows i, j of m := G * rows, for columns [c0, c1)
  void apply_left(Matrix& m, std::size_t i, std::size_t j, std::size_t c0, std::size_t c1) const {
    for (std::size_t k = c0; k < c1; ++k) {
      const Complex x = m(i, k);
      const Complex y = m(j, k);
      m(i, k) = c * x + s * y;
      m(j, k) = -std::conj(s) * x + c * y;
    }
  }

  // columns i, j of m := columns * G^*, for rows [r0, r1)
  void apply_right_adjoint(Matrix& m, std::size_t i, std::size_t j, std::size_t r0,
                           std::size_t r1) const {
    for (std::size_t k = r0; k < r1; ++k) {
      const Complex x = m(k, i);
      const Complex y = m(k, j);
      m(k, i) = x * c + y * std::conj(s);
      m(k, j) = -x * s + y * c;
    }
  }
};

Matrix orthonormalize_columns(const Matrix& a) {
  Matrix q = a;
  for (std::size_t j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i) dot += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) -= dot * q(i, k);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < q.rows(); ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    if (nrm > 0.0) {
      for (std::size_t i = 0; i < q.rows(); ++i) q(i, j) /= nrm;
    }
  }
  return q;
}

void hessenberg_reduce(Matrix& h, Matrix& q) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
    if (tail == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = (std::abs(x0) == 0.0) ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;

    const std::size_t len = n - k - 1;
    v.assign(len, 0.0);
    v[0] = x0 - alpha;
    for (std::size_t i = 1; i < len; ++i) v[i] = h(k + 1 + i, k);
    double vnorm = 0.0;
    for (const auto& z : v) vnorm += std::norm(z);
    vnorm = std::sqrt(vnorm);
    for (auto& z : v) z /= vnorm;

    // h := (I - 2 v v*) h on rows k+1..n-1
    for (std::size_t j = k; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < len; ++i) dot += std::conj(v[i]) * h(k + 1 + i, j);
      for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= 2.0 * v[i] * dot;
    }
    // h := h (I - 2 v v*) on columns k+1..n-1
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot = 0.0;
      for (std::size_t j = 0; j < len; ++j) dot += h(i, k + 1 + j) * v[j];
      for (std::size_t j = 0; j < len; ++j) h(i, k + 1 + j) -= 2.0 * dot * std::conj(v[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot = 0.0;
      for (std::size_t j = 0; j < len; ++j) dot += q(i, k + 1 + j) * v[j];
      for (std::size_t j = 0; j < len; ++j) q(i, k + 1 + j) -= 2.0 * dot * std::conj(v[j]);
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

Complex wilkinson_shift(const Matrix& h, std::size_t iu) {
  const Complex a = h(iu - 1, iu - 1);
  const Complex b = h(iu - 1, iu);
  const Complex c = h(iu, iu - 1);
  const Complex d = h(iu, iu);
  const Complex half = 0.5 * (a - d);
  const Complex disc = std::sqrt(half * half + b * c);
  const Complex mu1 = d + half + disc;
  const Complex mu2 = d + half - disc;
  return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

void hessenberg_qr(Matrix& h, Matrix& q) {
  const std::size_t n = h.rows();
  if (n < 2) return;
  const double hnorm = frobenius_norm(h);
  auto negligible = [&](std::size_t i) {
    const double sub = std::abs(h(i, i - 1));
    if (sub == 0.0) return true;
    double tst = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
    if (tst == 0.0) tst = hnorm;
    return sub <= kEps * tst || sub <= std::numeric_limits<double>::min();
  };

  std::size_t iu = n - 1;
  int iter = 0;
  const int max_iter = 100 * static_cast<int>(n);
  int total = 0;
  while (true) {
    while (iu > 0 && negligible(iu)) {
      h(iu, iu - 1) = 0.0;
      --iu;
      iter = 0;
    }
    if (iu == 0) break;
    if (++total > max_iter) fail(ErrorCode::NoConvergence, "schur: QR iteration did not converge");
    ++iter;

    std::size_t il = iu - 1;
    while (il > 0 && !negligible(il)) --il;

    Complex shift;
    if (iter % 10 == 0) {
      // exceptional shift
      shift = std::abs(h(iu, iu - 1).real()) + (iu >= 2 ? std::abs(h(iu - 1, iu - 2).real()) : 0.0);
      shift += h(iu, iu);
    } else {
      shift = wilkinson_shift(h, iu);
    }

    Givens g = Givens::make(h(il, il) - shift, h(il + 1, il));
    g.apply_left(h, il, il + 1, il, n);
    g.apply_right_adjoint(h, il, il + 1, 0, std::min(il + 2, iu) + 1);
    g.apply_right_adjoint(q, il, il + 1, 0, n);

    for (std::size_t i = il + 1; i < iu; ++i) {
      g = Givens::make(h(i, i - 1), h(i + 1, i - 1));
      g.apply_left(h, i, i + 1, i - 1, n);
      h(i + 1, i - 1) = 0.0;
      g.apply_right_adjoint(h, i, i + 1, 0, std::min(i + 2, iu) + 1);
      g.apply_right_adjoint(q, i, i + 1, 0, n);
    }
  }
}

// Swaps the adjacent diagonal entries k, k+1 of the triangular factor.
void swap_schur(Matrix& t, Matrix& q, std::size_t k) {
  const std::size_t n = t.rows();
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  const Givens g = Givens::make(t(k, k + 1), t22 - t11);
  g.apply_left(t, k, k + 1, k + 2, n);
  g.apply_right_adjoint(t, k, k + 1, 0, k);
  g.apply_right_adjoint(q, k, k + 1, 0, n);
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
}

// Solves a x - x b = c for upper-triangular a, b with disjoint spectra.
Matrix triangular_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
  const std::size_t m = a.rows();
  const std::size_t k = b.rows();
  Matrix x(m, k);
  std::vector<Complex> rhs(m);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      Complex r = c(i, j);
      for (std::size_t l = 0; l < j; ++l) r += x(i, l) * b(l, j);
      rhs[i] = r;
    }
    const Complex shift = b(j, j);
    for (std::size_t ii = m; ii-- > 0;) {
      Complex r = rhs[ii];
      for (std::size_t l = ii + 1; l < m; ++l) r -= a(ii, l) * x(l, j);
      x(ii, j) = r / (a(ii, ii) - shift);
    }
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix / Vector

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    fail(ErrorCode::DimensionMismatch, "matrix: entry count does not match shape");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::DimensionMismatch, "matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const Complex> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::column(const Vector& v) {
  Matrix m(v.dim(), 1);
  for (std::size_t i = 0; i < v.dim(); ++i) m(i, 0) = v[i];
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Matrix Matrix::block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const {
  if (row + rows > rows_ || col + cols > cols_) fail(ErrorCode::DimensionMismatch, "matrix: block out of range");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = (*this)(row + i, col + j);
  return m;
}

void Matrix::set_block(std::size_t row, std::size_t col, const Matrix& b) {
  if (row + b.rows() > rows_ || col + b.cols() > cols_) {
    fail(ErrorCode::DimensionMismatch, "matrix: block out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(row + i, col + j) = b(i, j);
}

Vector Matrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "matrix +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_shape(*this, rhs, "matrix -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Vector Vector::unit(std::size_t dim, std::size_t k) {
  Vector v(dim);
  v[k] = 1.0;
  return v;
}

bool Vector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

Vector& Vector::operator+=(const Vector& rhs) {
  if (dim() != rhs.dim()) fail(ErrorCode::DimensionMismatch, "vector +: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
  if (dim() != rhs.dim()) fail(ErrorCode::DimensionMismatch, "vector -: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Vector& Vector::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Complex s, Matrix m) { return m *= s; }
Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator*(Complex s, Vector v) { return v *= s; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    fail(ErrorCode::DimensionMismatch, "matrix *: inner dimensions " + std::to_string(lhs.cols()) +
                                           " and " + std::to_string(rhs.rows()));
  }
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex(0.0)) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Vector operator*(const Matrix& m, const Vector& v) {
  if (m.cols() != v.dim()) fail(ErrorCode::DimensionMismatch, "matrix * vector: dimension mismatch");
  Vector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Matrix power(const Matrix& m, std::size_t n) {
  if (!m.square()) fail(ErrorCode::DimensionMismatch, "power: matrix not square");
  Matrix result = Matrix::identity(m.rows());
  Matrix base = m;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

double norm2(const Vector& v) {
  double s = 0.0;
  for (const auto& z : v.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (const auto& z : m.entries()) s = std::max(s, std::abs(z));
  return s;
}

double spectral_norm(const Matrix& m, int iterations) {
  if (m.empty() || max_abs(m) == 0.0) return 0.0;
  const std::size_t n = m.cols();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = Complex(1.0 + 0.37 * static_cast<double>(i), 0.11 * static_cast<double>(i % 3));
  }
  const Matrix adj = m.adjoint();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double xn = norm2(x);
    if (xn == 0.0) break;
    x *= 1.0 / xn;
    const Vector y = m * x;
    estimate = norm2(y);
    x = adj * y;
  }
  return estimate;
}

// ---------------------------------------------------------------------------
// solve

Matrix solve(const Matrix& a, const Matrix& b, double singular_tol) {
  if (!a.square()) fail(ErrorCode::DimensionMismatch, "solve: matrix not square");
  if (b.rows() != a.rows()) fail(ErrorCode::DimensionMismatch, "solve: right-hand side row count");
  const std::size_t n = a.rows();
  const double scale = spectral_norm(a);
  const double threshold = singular_tol * scale;
  if (scale == 0.0) fail(ErrorCode::SingularMatrix, "solve: zero matrix");

  Matrix lu = a;
  Matrix x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        piv = i;
      }
    }
    if (best <= threshold) {
      fail(ErrorCode::SingularMatrix, "solve: pivot " + format_number(best) + " below threshold at step " +
                                          std::to_string(k));
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = lu(i, k) / lu(k, k);
      if (f == Complex(0.0)) continue;
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (std::size_t i = n; i-- > 0;) {
      Complex acc = x(i, j);
      for (std::size_t l = i + 1; l < n; ++l) acc -= lu(i, l) * x(l, j);
      x(i, j) = acc / lu(i, i);
    }
  }
  return x;
}

Vector solve(const Matrix& a, const Vector& b, double singular_tol) {
  return solve(a, Matrix::column(b), singular_tol).col(0);
}

// ---------------------------------------------------------------------------
// SVD

std::size_t Svd::rank(double rank_tol) const {
  if (sigma.empty() || sigma.front() == 0.0) return 0;
  const double cut = rank_tol * sigma.front();
  return static_cast<std::size_t>(
      std::count_if(sigma.begin(), sigma.end(), [cut](double s) { return s > cut; }));
}

Matrix Svd::null_space(double rank_tol) const {
  const std::size_t r = rank(rank_tol);
  return v.block(0, r, v.rows(), v.cols() - r);
}

Svd svd(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix w = a;
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(w(i, p));
          beta += std::norm(w(i, q));
          gamma += std::conj(w(i, p)) * w(i, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = std::conj(gamma) / g;  // e^{-i phi}
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const Complex wp = w(i, p);
          const Complex wq = phase * w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vp = v(i, p);
          const Complex vq = phase * v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(w(i, j));
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  const std::size_t k = std::min(m, n);
  Svd out;
  out.sigma.resize(k);
  out.u = Matrix(m, k);
  out.v = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
    if (j < k) {
      out.sigma[j] = norms[src];
      if (norms[src] > 0.0) {
        for (std::size_t i = 0; i < m; ++i) out.u(i, j) = w(i, src) / norms[src];
      }
    }
  }
  // complete U where singular values vanish
  for (std::size_t j = 0; j < k; ++j) {
    if (out.sigma[j] > 0.0) continue;
    for (std::size_t e = 0; e < m; ++e) {
      Vector cand = Vector::unit(m, e);
      for (std::size_t l = 0; l < k; ++l) {
        if (l == j || (l > j && out.sigma[l] == 0.0)) continue;
        Complex dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += std::conj(out.u(i, l)) * cand[i];
        for (std::size_t i = 0; i < m; ++i) cand[i] -= dot * out.u(i, l);
      }
      const double nrm = norm2(cand);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < m; ++i) out.u(i, j) = cand[i] / nrm;
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schur and eigenvalues

Schur schur(const Matrix& a) {
  if (!a.square()) fail(ErrorCode::DimensionMismatch, "schur: matrix not square");
  if (!a.all_finite()) fail(ErrorCode::InvalidArgument, "schur: non-finite entries");
  Schur s{Matrix::identity(a.rows()), a};
  hessenberg_reduce(s.t, s.q);
  hessenberg_qr(s.t, s.q);
  for (std::size_t i = 1; i < s.t.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) s.t(i, j) = 0.0;
  return s;
}

std::vector<Complex> eigenvalues(const Matrix& a) {
  const Schur s = schur(a);
  std::vector<Complex> ev(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) ev[i] = s.t(i, i);
  return ev;
}

Matrix orthonormalize(const Matrix& a) { return orthonormalize_columns(a); }

double spectral_radius(const Matrix& a) {
  double r = 0.0;
  for (const auto& z : eigenvalues(a)) r = std::max(r, std::abs(z));
  return r;
}

bool complex_less(const Complex& a, const Complex& b) noexcept {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<std::size_t> cluster_points(std::span<const Complex> points, double tol) {
  const std::size_t n = points.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(points[i] - points[j]) <= tol) {
        const std::size_t ri = find(i);
        const std::size_t rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<std::size_t> roots;
  std::vector<Complex> sums;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> root_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    std::size_t idx = static_cast<std::size_t>(it - roots.begin());
    if (it == roots.end()) {
      roots.push_back(r);
      sums.push_back(0.0);
      counts.push_back(0);
    }
    sums[idx] += points[i];
    counts[idx] += 1;
    root_of[i] = idx;
  }
  std::vector<std::size_t> order(roots.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return complex_less(sums[x] / static_cast<double>(counts[x]), sums[y] / static_cast<double>(counts[y]));
  });
  std::vector<std::size_t> rank(roots.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = rank[root_of[i]];
  return ids;
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](std::span<const Complex> x, std::span<const Complex> y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

// ---------------------------------------------------------------------------
// Spectral decomposition

std::size_t SpectralDecomposition::dim() const noexcept {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), std::size_t{0});
}

double default_cluster_tol(const Matrix& t) { return 1e-7 * (1.0 + spectral_norm(t)); }

SpectralDecomposition eigendecompose(const Matrix& t, const EigenOptions& options) {
  if (!t.square()) fail(ErrorCode::DimensionMismatch, "eigendecompose: matrix not square");
  const std::size_t n = t.rows();
  const double tol = options.cluster_tol > 0.0 ? options.cluster_tol : default_cluster_tol(t);

  Schur s = schur(t);
  std::vector<Complex> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = s.t(i, i);
  std::vector<std::size_t> ids = cluster_points(diag, tol);
  const std::size_t clusters = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;

  SpectralDecomposition out;
  out.cluster_tol = tol;
  out.eigenvalues.assign(clusters, 0.0);
  out.multiplicities.assign(clusters, 0);
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues[ids[i]] += diag[i];
    out.multiplicities[ids[i]] += 1;
  }
  for (std::size_t c = 0; c < clusters; ++c) out.eigenvalues[c] /= static_cast<double>(out.multiplicities[c]);

  for (std::size_t a = 0; a < clusters; ++a) {
    for (std::size_t b = a + 1; b < clusters; ++b) {
      if (std::abs(out.eigenvalues[a] - out.eigenvalues[b]) < 3.0 * tol) {
        fail(ErrorCode::ClusterSeparationFailure,
             "eigendecompose: clusters closer than 3*cluster_tol (" + format_number(tol) + ") but not merged");
      }
    }
  }

  // Group the Schur diagonal by cluster id (stable bubble sort with adjacent swaps).
  for (std::size_t pass = 0; pass < n; ++pass) {
    bool swapped = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (ids[k] > ids[k + 1]) {
        swap_schur(s.t, s.q, k);
        std::swap(ids[k], ids[k + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) s.t(i, j) = 0.0;

  std::vector<std::size_t> offsets(clusters + 1, 0);
  for (std::size_t c = 0; c < clusters; ++c) offsets[c + 1] = offsets[c] + out.multiplicities[c];

  // Block-diagonalize: y^{-1} t y = diag(T_11, ..., T_kk).
  Matrix u = s.t;
  Matrix y = Matrix::identity(n);
  Matrix y_inv = Matrix::identity(n);
  for (std::size_t c = 0; c + 1 < clusters; ++c) {
    const std::size_t a0 = offsets[c];
    const std::size_t m = out.multiplicities[c];
    const std::size_t b0 = offsets[c + 1];
    const std::size_t k = n - b0;
    const Matrix a_blk = u.block(a0, a0, m, m);
    const Matrix b_blk = u.block(b0, b0, k, k);
    Matrix c_blk = u.block(a0, b0, m, k);
    c_blk *= -1.0;
    const Matrix x = triangular_sylvester(a_blk, b_blk, c_blk);
    // u := Y_c^{-1} u Y_c, only the coupling block changes
    u.set_block(a0, b0, Matrix(m, k));
    // y := y Y_c, Y_c = I + E_{a,b} x
    Matrix y_cols = y.block(0, a0, n, m) * x;
    y.set_block(0, b0, y.block(0, b0, n, k) + y_cols);
    // y_inv := Y_c^{-1} y_inv, Y_c^{-1} = I - E_{a,b} x
    Matrix y_rows = x * y_inv.block(b0, 0, k, n);
    y_inv.set_block(a0, 0, y_inv.block(a0, 0, m, n) - y_rows);
  }
  const Matrix qy = s.q * y;
  const Matrix yq = y_inv * s.q.adjoint();

  out.subspace_bases.reserve(clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    out.subspace_bases.push_back(orthonormalize_columns(qy.block(0, offsets[c], n, out.multiplicities[c])));
  }

  out.projections.reserve(clusters);
  if (options.method == ProjectionMethod::BlockDiagonal || clusters == 0) {
    for (std::size_t c = 0; c < clusters; ++c) {
      const std::size_t m = out.multiplicities[c];
      out.projections.push_back(qy.block(0, offsets[c], n, m) * yq.block(offsets[c], 0, m, n));
    }
    return out;
  }

  const std::size_t nodes = std::max<std::size_t>(options.quadrature_nodes, 4);
  const Matrix eye = Matrix::identity(n);
  for (std::size_t c = 0; c < clusters; ++c) {
    const Complex center = out.eigenvalues[c];
    double radius = std::numeric_limits<double>::infinity();
    for (std::size_t o = 0; o < clusters; ++o) {
      if (o != c) radius = std::min(radius, 0.5 * std::abs(center - out.eigenvalues[o]));
    }
    if (!std::isfinite(radius)) {
      double spread = 0.0;
      for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(diag[i] - center));
      radius = 1.0 + 2.0 * spread;
    }
    Matrix p(n, n);
    for (std::size_t k = 0; k < nodes; ++k) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(nodes);
      const Complex w = std::polar(1.0, theta);
      const Complex z = center + radius * w;
      Matrix shifted = z * eye;
      shifted -= t;
      Matrix r = solve(shifted, eye, 0.0);
      r *= radius * w / static_cast<double>(nodes);
      p += r;
    }
    out.projections.push_back(std::move(p));
  }
  return out;
}

Matrix semisimple_part(const Matrix& t, const EigenOptions& options) {
  const SpectralDecomposition dec = eigendecompose(t, options);
  Matrix d(t.rows(), t.cols());
  for (std::size_t c = 0; c < dec.cluster_count(); ++c) d += dec.eigenvalues[c] * dec.projections[c];
  return d;
}

}  // namespace qnequiv
