// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "qnequiv/calibration.hpp"
#include "qnequiv/corpus.hpp"
#include "support.hpp"

using namespace qnequiv;
using qntest::diag;
using qntest::diff;
using qntest::real_matrix;

namespace {

Calibration coordinates() {
  return Calibration(2, {Seminorm("p1", real_matrix({{1, 0}})), Seminorm("p2", real_matrix({{0, 1}}))});
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

// sup p(Tx)/p(x) over the quotient: ||A_p T pinv(A_p)|| computed with Eigen.
double oracle_phat(const Matrix& t, const Matrix& a) {
  const Eigen::MatrixXcd ae = qntest::to_eigen(a);
  const Eigen::MatrixXcd pinv = ae.completeOrthogonalDecomposition().pseudoInverse();
  return qntest::oracle_norm(Eigen::MatrixXcd(ae * qntest::to_eigen(t) * pinv));
}

}  // namespace

TEST_SUITE("calibration") {

TEST_CASE("seminorm_eval examples") {
  const Vector x{3.0, 4.0};
  CHECK(seminorm_eval(Seminorm("p", real_matrix({{1, 0}})), x) == doctest::Approx(3.0));
  CHECK(seminorm_eval(Seminorm("p", Matrix::identity(2)), Vector(2)) == 0.0);
  CHECK(seminorm_eval(Seminorm("p", Matrix::identity(2)), x) == doctest::Approx(5.0));
}

TEST_CASE("seminorm structure") {
  const Seminorm p("p", real_matrix({{3, 0}, {0, 0}, {0, 0}}));
  CHECK(p.rank() == 1);
  CHECK(p.kernel().cols() == 1);
  CHECK(std::abs(p.kernel()(1, 0)) == doctest::Approx(1.0));
  CHECK(p.defining_norm() == doctest::Approx(3.0));
}

TEST_CASE("seminorm axioms and quotient-norm reproduction on samples") {
  Rng rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    const std::size_t r = 1 + rng.index(n);
    const Seminorm p("p", random_matrix(rng, r, n));
    for (int k = 0; k < 10; ++k) {
      const Vector x = random_vector(rng, n);
      const Vector y = random_vector(rng, n);
      const Complex alpha = rng.complex_box(3.0);
      CHECK(p(x) >= 0.0);
      CHECK(std::abs(p(alpha * x) - std::abs(alpha) * p(x)) <= 1e-12 * (1 + p(alpha * x)));
      CHECK(p(x + y) <= (p(x) + p(y)) * (1 + 1e-12));
      CHECK(std::abs(p.quotient_norm(p.project(x)) - p(x)) <= 1e-12 * std::max(1.0, p(x)));
    }
    // Zero exactly on the kernel.
    for (std::size_t c = 0; c < p.kernel().cols(); ++c) CHECK(p(p.kernel().col(c)) <= 1e-10 * p.defining_norm());
  }
}

TEST_CASE("calibration validation") {
  CHECK(code_of([] { Calibration(2, {}); }) == ErrorCode::ValidationError);
  CHECK(code_of([] { Calibration(2, {Seminorm("p", real_matrix({{1, 0}}))}); }) == ErrorCode::ValidationError);
  CHECK(Calibration(2, {Seminorm("p", real_matrix({{1, 0}}))}, true).separating() == false);
  CHECK(code_of([] {
          Calibration(2, {Seminorm("p", Matrix::identity(2)), Seminorm("p", Matrix::identity(2))});
        }) == ErrorCode::ValidationError);
  CHECK(code_of([] { Calibration(2, {Seminorm("p", Matrix::identity(3))}); }) != ErrorCode::InvalidArgument);
  CHECK(coordinates().separating());
  CHECK(Calibration::euclidean(3).size() == 1);
}

TEST_CASE("is_quotient_bounded examples") {
  const QuotientBoundedness diag_case = is_quotient_bounded(diag({2, 3}), coordinates());
  CHECK(diag_case.bounded);
  REQUIRE(diag_case.certificates.size() == 2);
  CHECK(diag_case.certificates[0].bound == doctest::Approx(2.0));
  CHECK(diag_case.certificates[1].bound == doctest::Approx(3.0));

  const Matrix shift = real_matrix({{0, 1}, {0, 0}});
  const QuotientBoundedness shift_case = is_quotient_bounded(shift, coordinates());
  CHECK_FALSE(shift_case.bounded);
  CHECK_FALSE(shift_case.certificates[0].invariant);
  CHECK(shift_case.certificates[1].invariant);

  const QuotientBoundedness eucl = is_quotient_bounded(shift, Calibration::euclidean(2));
  CHECK(eucl.bounded);
  CHECK(eucl.certificates[0].bound == doctest::Approx(1.0));
}

TEST_CASE("phat examples") {
  CHECK(phat(Matrix::identity(2), Seminorm("p", real_matrix({{1, 0}}))) == doctest::Approx(1.0));
  CHECK(phat(diag({2, 3}), Seminorm("p", real_matrix({{1, 0}}))) == doctest::Approx(2.0));
  const Matrix jordan = real_matrix({{1, 1}, {0, 1}});
  const double golden = phat(jordan, Seminorm("e", Matrix::identity(2)));
  CHECK(golden == doctest::Approx(qntest::oracle_norm(jordan)).epsilon(1e-13));
  CHECK(golden == doctest::Approx(1.6180339887498949).epsilon(1e-13));
  CHECK(code_of([] { phat(real_matrix({{0, 1}, {0, 0}}), Seminorm("p1", real_matrix({{1, 0}}))); }) ==
        ErrorCode::NotQuotientBounded);
}

TEST_CASE("induced_operator examples") {
  const QuotientOperator q1 = induced_operator(diag({1, 2}), Seminorm("p1", real_matrix({{1, 0}})));
  REQUIRE(q1.matrix.rows() == 1);
  CHECK(std::abs(q1.matrix(0, 0) - Complex(1.0)) < 1e-14);
  const QuotientOperator q2 = induced_operator(diag({1, 2}), Seminorm("p2", real_matrix({{0, 1}})));
  CHECK(std::abs(q2.matrix(0, 0) - Complex(2.0)) < 1e-14);
  // With N^p = 0 the quotient coordinates are a unitary change of basis:
  // same spectrum and norm as T.
  const Matrix jordan = real_matrix({{1, 1}, {0, 1}});
  const QuotientOperator q = induced_operator(jordan, Seminorm("e", Matrix::identity(2)));
  REQUIRE(q.matrix.rows() == 2);
  const Seminorm e("e", Matrix::identity(2));
  CHECK(diff(e.quotient_coords().adjoint() * q.matrix * e.quotient_coords(), jordan) < 1e-14);
}

TEST_CASE("phat matches a pseudo-inverse oracle on invariant-kernel cases") {
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    const CalibratedOperator c = make_invariant_kernel_case(rng, n);
    CHECK(is_quotient_bounded(c.t, c.calibration).bounded);
    for (const Seminorm& p : c.calibration.seminorms()) {
      const double ours = phat(c.t, p);
      CHECK(ours == doctest::Approx(oracle_phat(c.t, p.defining_matrix())).epsilon(1e-9));
    }
  }
}

TEST_CASE("quotient calculus properties") {
  // Two operators sharing the invariant flag W[:, :k] are built from the same
  // unitary: T = W U1 W*, S = W U2 W* with U1, U2 upper triangular.
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    const Matrix w = random_unitary(rng, n);
    auto upper = [&] {
      Matrix u(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) u(i, j) = rng.complex_box(1.0);
      return w * u * w.adjoint();
    };
    const Matrix t = upper();
    const Matrix s = upper();
    const std::size_t k = 1 + rng.index(n - 1);
    Matrix m = random_matrix(rng, n - k, n - k, 0.5);
    m += 2.0 * Matrix::identity(n - k);
    const Seminorm p("p", m * w.block(0, k, n, n - k).adjoint());

    // Submultiplicativity and the norm identity.
    const double pt = phat(t, p);
    const double ps = phat(s, p);
    CHECK(phat(t * s, p) <= pt * ps * (1 + 1e-10));
    CHECK(induced_operator(t, p).norm == pt);
    // Domination on samples.
    for (int j = 0; j < 100; ++j) {
      const Vector x = random_vector(rng, n);
      CHECK(p(t * x) <= pt * p(x) * (1 + 1e-10) + 1e-14);
    }
    // Functoriality.
    const Matrix lhs = induced_operator(t * s, p).matrix;
    const Matrix rhs = induced_operator(t, p).matrix * induced_operator(s, p).matrix;
    CHECK(diff(lhs, rhs) <= 1e-10 * (1 + qntest::oracle_norm(lhs)));
  }
}

TEST_CASE("require_quotient_bounded and dimension checks") {
  CHECK(code_of([] { require_quotient_bounded(real_matrix({{0, 1}, {0, 0}}), coordinates(), "test"); }) ==
        ErrorCode::NotQuotientBounded);
  CHECK(code_of([] { require_quotient_bounded(Matrix::identity(3), coordinates(), "test"); }) ==
        ErrorCode::DimensionMismatch);
  CHECK_NOTHROW(require_quotient_bounded(diag({5, 6}), coordinates(), "test"));
}

}  // TEST_SUITE
