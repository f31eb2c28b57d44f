// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QNEQUIV_CORPUS_HPP
#define QNEQUIV_CORPUS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qnequiv/calibration.hpp"
#include "qnequiv/linalg.hpp"

namespace qnequiv {

/// Deterministic generator. Uses raw mt19937_64 output (fully specified by
/// the standard) rather than the implementation-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  Complex complex_box(double half_width) {
    return {uniform(-half_width, half_width), uniform(-half_width, half_width)};
  }

 private:
  std::mt19937_64 engine_;
};

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double half_width = 1.0);
Vector random_vector(Rng& rng, std::size_t dim, double half_width = 1.0);
Matrix random_unitary(Rng& rng, std::size_t n);

enum class CorpusKind { SharedSemisimple, NilpotentPair, PermutedDiagonal, RandomDense };

/// Throws UnknownKind.
CorpusKind parse_corpus_kind(std::string_view name);
std::string_view to_string(CorpusKind kind) noexcept;

/// T, S (and a third operator R for triples). For shared-semisimple all
/// three share one semisimple part; for nilpotent-pair all are nilpotent.
struct OperatorTriple {
  Matrix t;
  Matrix s;
  Matrix r;
  bool equivalent_by_construction = false;
};

OperatorTriple make_shared_semisimple(Rng& rng, std::size_t dim);
OperatorTriple make_nilpotent_pair(Rng& rng, std::size_t dim);
OperatorTriple make_permuted_diagonal(Rng& rng, std::size_t dim);
OperatorTriple make_random_dense(Rng& rng, std::size_t dim);
/// Same Jordan structure and eigenbasis, one eigenvalue of S moved by a gap
/// comparable to the spectrum's diameter. Never equivalent.
OperatorTriple make_spectral_gap(Rng& rng, std::size_t dim);

OperatorTriple make_triple(Rng& rng, std::size_t dim, CorpusKind kind);

/// Quotient bounded T = W U W* (U upper triangular) together with a
/// separating calibration whose null spaces are spans of leading columns of W.
struct CalibratedOperator {
  Matrix t;
  Calibration calibration;
};

CalibratedOperator make_invariant_kernel_case(Rng& rng, std::size_t dim, double norm_bound = 4.0);

}  // namespace qnequiv

#endif  // QNEQUIV_CORPUS_HPP
