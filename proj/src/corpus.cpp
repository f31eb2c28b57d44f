// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnequiv/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qnequiv {

namespace {

struct JordanLayout {
  std::vector<Complex> values;             // one per block
  std::vector<std::size_t> multiplicities;
};

// k distinct eigenvalues on a circle, with a random composition of dim.
JordanLayout random_layout(Rng& rng, std::size_t dim, double radius) {
  JordanLayout layout;
  const std::size_t k = 1 + rng.index(dim);
  const double offset = rng.uniform(0.0, 2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < k; ++j) {
    if (k == 1) {
      layout.values.push_back(rng.complex_box(1.0));
    } else {
      layout.values.push_back(std::polar(radius, offset + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                                              static_cast<double>(k)));
    }
  }
  layout.multiplicities.assign(k, 1);
  for (std::size_t extra = dim - k; extra > 0; --extra) layout.multiplicities[rng.index(k)] += 1;
  return layout;
}

// Lambda + N with N strictly upper triangular inside each diagonal block.
Matrix jordan_like(Rng& rng, const JordanLayout& layout, double coupling) {
  const std::size_t dim = std::accumulate(layout.multiplicities.begin(), layout.multiplicities.end(), std::size_t{0});
  Matrix j(dim, dim);
  std::size_t at = 0;
  for (std::size_t b = 0; b < layout.values.size(); ++b) {
    const std::size_t m = layout.multiplicities[b];
    for (std::size_t i = 0; i < m; ++i) {
      j(at + i, at + i) = layout.values[b];
      for (std::size_t l = i + 1; l < m; ++l) j(at + i, at + l) = rng.complex_box(coupling);
    }
    at += m;
  }
  return j;
}

Matrix unit_upper(Rng& rng, std::size_t dim, double half_width) {
  Matrix v = Matrix::identity(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t l = i + 1; l < dim; ++l) v(i, l) = rng.complex_box(half_width);
  return v;
}

// V J V^{-1}; for unit upper-triangular V the result stays exactly upper
// triangular with the diagonal of J, so its spectrum is exact.
Matrix similar(const Matrix& v, const Matrix& j) {
  const Matrix v_inv = solve(v, Matrix::identity(v.rows()));
  return v * j * v_inv;
}

Matrix unitary_similar(const Matrix& w, const Matrix& j) { return w * j * w.adjoint(); }

std::size_t max_multiplicity(const JordanLayout& layout) {
  return *std::max_element(layout.multiplicities.begin(), layout.multiplicities.end());
}

// Sattolo: uniformly random cyclic permutation, hence a derangement.
std::vector<std::size_t> random_cycle(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.index(i)]);
  return perm;
}

}  // namespace

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double half_width) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_box(half_width);
  return m;
}

Vector random_vector(Rng& rng, std::size_t dim, double half_width) {
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = rng.complex_box(half_width);
  return v;
}

Matrix random_unitary(Rng& rng, std::size_t n) { return orthonormalize(random_matrix(rng, n, n)); }

CorpusKind parse_corpus_kind(std::string_view name) {
  if (name == "shared-semisimple") return CorpusKind::SharedSemisimple;
  if (name == "nilpotent-pair") return CorpusKind::NilpotentPair;
  if (name == "permuted-diagonal") return CorpusKind::PermutedDiagonal;
  if (name == "random-dense") return CorpusKind::RandomDense;
  fail(ErrorCode::UnknownKind, "unknown corpus kind '" + std::string(name) +
                                   "' (expected shared-semisimple, nilpotent-pair, permuted-diagonal, random-dense)");
}

std::string_view to_string(CorpusKind kind) noexcept {
  switch (kind) {
    case CorpusKind::SharedSemisimple: return "shared-semisimple";
    case CorpusKind::NilpotentPair: return "nilpotent-pair";
    case CorpusKind::PermutedDiagonal: return "permuted-diagonal";
    case CorpusKind::RandomDense: return "random-dense";
  }
  return "unknown";
}

OperatorTriple make_shared_semisimple(Rng& rng, std::size_t dim) {
  if (dim == 0) fail(ErrorCode::InvalidArgument, "corpus: dimension must be positive");
  const JordanLayout layout = random_layout(rng, dim, 1.5);
  const Matrix v = unit_upper(rng, dim, 0.4);
  OperatorTriple out;
  out.t = similar(v, jordan_like(rng, layout, 0.5));
  out.s = similar(v, jordan_like(rng, layout, 0.5));
  out.r = similar(v, jordan_like(rng, layout, 0.5));
  if (max_multiplicity(layout) <= 2) {
    // Jordan blocks of size <= 2 split by O(sqrt(eps)) under roundoff, well
    // inside the default cluster tolerance, so a dense basis is safe here.
    const Matrix w = random_unitary(rng, dim);
    out.t = unitary_similar(w, out.t);
    out.s = unitary_similar(w, out.s);
    out.r = unitary_similar(w, out.r);
  }
  out.equivalent_by_construction = true;
  return out;
}

OperatorTriple make_nilpotent_pair(Rng& rng, std::size_t dim) {
  if (dim < 2) fail(ErrorCode::InvalidArgument, "corpus: nilpotent-pair needs dimension >= 2");
  OperatorTriple out;
  out.equivalent_by_construction = true;
  if (dim == 2) {
    out.t = Matrix{{0.0, rng.complex_box(1.0)}, {0.0, 0.0}};
    out.s = Matrix{{0.0, 0.0}, {rng.complex_box(1.0), 0.0}};
    out.r = Matrix{{0.0, rng.complex_box(1.0)}, {0.0, 0.0}};
    return out;
  }
  const JordanLayout zero{{Complex(0.0)}, {dim}};
  out.t = similar(unit_upper(rng, dim, 0.4), jordan_like(rng, zero, 0.6));
  out.s = similar(unit_upper(rng, dim, 0.4), jordan_like(rng, zero, 0.6));
  out.r = similar(unit_upper(rng, dim, 0.4), jordan_like(rng, zero, 0.6));
  return out;
}

OperatorTriple make_permuted_diagonal(Rng& rng, std::size_t dim) {
  if (dim < 2) fail(ErrorCode::InvalidArgument, "corpus: permuted-diagonal needs dimension >= 2");
  const double offset = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> values(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    values[j] = std::polar(2.0, offset + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(dim));
  }
  const std::vector<std::size_t> perm = random_cycle(rng, dim);
  std::vector<Complex> permuted(dim);
  std::vector<Complex> twice(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    permuted[j] = values[perm[j]];
    twice[j] = values[perm[perm[j]]];
  }
  const Matrix w = random_unitary(rng, dim);
  OperatorTriple out;
  out.t = unitary_similar(w, Matrix::diagonal(values));
  out.s = unitary_similar(w, Matrix::diagonal(permuted));
  out.r = unitary_similar(w, Matrix::diagonal(twice));
  return out;
}

OperatorTriple make_random_dense(Rng& rng, std::size_t dim) {
  if (dim == 0) fail(ErrorCode::InvalidArgument, "corpus: dimension must be positive");
  OperatorTriple out;
  out.t = random_matrix(rng, dim, dim, 0.5);
  out.s = random_matrix(rng, dim, dim, 0.5);
  out.r = random_matrix(rng, dim, dim, 0.5);
  return out;
}

OperatorTriple make_spectral_gap(Rng& rng, std::size_t dim) {
  if (dim == 0) fail(ErrorCode::InvalidArgument, "corpus: dimension must be positive");
  const JordanLayout layout = random_layout(rng, dim, 1.5);
  JordanLayout moved = layout;
  const std::size_t b = rng.index(layout.values.size());
  const Complex dir = std::abs(layout.values[b]) > 0.0 ? layout.values[b] / std::abs(layout.values[b]) : Complex(1.0);
  moved.values[b] += 2.0 * dir;
  const Matrix v = unit_upper(rng, dim, 0.4);
  OperatorTriple out;
  out.t = similar(v, jordan_like(rng, layout, 0.5));
  out.s = similar(v, jordan_like(rng, moved, 0.5));
  out.r = similar(v, jordan_like(rng, layout, 0.5));
  return out;
}

OperatorTriple make_triple(Rng& rng, std::size_t dim, CorpusKind kind) {
  switch (kind) {
    case CorpusKind::SharedSemisimple: return make_shared_semisimple(rng, dim);
    case CorpusKind::NilpotentPair: return make_nilpotent_pair(rng, dim);
    case CorpusKind::PermutedDiagonal: return make_permuted_diagonal(rng, dim);
    case CorpusKind::RandomDense: return make_random_dense(rng, dim);
  }
  fail(ErrorCode::UnknownKind, "unknown corpus kind");
}

CalibratedOperator make_invariant_kernel_case(Rng& rng, std::size_t dim, double norm_bound) {
  if (dim == 0) fail(ErrorCode::InvalidArgument, "corpus: dimension must be positive");
  const Matrix w = random_unitary(rng, dim);
  Matrix u(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    u(i, i) = rng.complex_box(1.5);
    for (std::size_t l = i + 1; l < dim; ++l) u(i, l) = rng.complex_box(0.5);
  }
  Matrix t = unitary_similar(w, u);
  const double nrm = spectral_norm(t);
  if (nrm > norm_bound) t *= norm_bound / nrm;

  std::vector<Seminorm> family;
  {
    std::vector<Complex> weights(dim);
    for (auto& x : weights) x = rng.uniform(0.5, 2.0);
    family.emplace_back("p0", Matrix::diagonal(weights) * w.adjoint());
  }
  const std::size_t extra = dim > 1 ? 1 + rng.index(3) : 0;
  for (std::size_t j = 0; j < extra; ++j) {
    const std::size_t kernel_dim = 1 + rng.index(dim - 1);
    const std::size_t r = dim - kernel_dim;
    Matrix m = random_matrix(rng, r, r, 0.5);
    m += 2.0 * Matrix::identity(r);
    const Matrix complement = w.block(0, kernel_dim, dim, r).adjoint();
    family.emplace_back("p" + std::to_string(j + 1), m * complement);
  }
  return {std::move(t), Calibration(dim, std::move(family))};
}

}  // namespace qnequiv
