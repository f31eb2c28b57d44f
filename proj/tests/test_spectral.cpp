// Copyright 2026 The qnequiv Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <limits>

#include "qnequiv/corpus.hpp"
#include "qnequiv/spectral.hpp"
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

// Central difference of order n built from resolvents, the independent
// reference for the closed-form derivative.
Matrix fd_derivative(const Matrix& t, Complex lambda, std::size_t n, double h) {
  if (n == 0) return resolvent(t, lambda);
  return (1.0 / (2.0 * h)) * (fd_derivative(t, lambda + h, n - 1, h) - fd_derivative(t, lambda - h, n - 1, h));
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("radius_exact examples") {
  const Calibration e = Calibration::euclidean(2);
  CHECK(radius_exact(diag({0.5, 0.25}), e) == doctest::Approx(0.5));
  CHECK(radius_exact(real_matrix({{0, 5}, {0, 0}}), e) == 0.0);
  CHECK(radius_exact(real_matrix({{1, 1}, {0, 1}}), e) == doctest::Approx(1.0));
}

TEST_CASE("radius_estimate examples") {
  const Calibration e = Calibration::euclidean(2);
  for (double g : radius_estimate(0.5 * Matrix::identity(2), e, 16)) CHECK(g == doctest::Approx(0.5));
  const auto nil = radius_estimate(real_matrix({{0, 5}, {0, 0}}), e, 8);
  CHECK(nil[0] == doctest::Approx(5.0));
  for (std::size_t n = 1; n < nil.size(); ++n) CHECK(nil[n] == 0.0);
  const auto jordan = radius_estimate(real_matrix({{1, 1}, {0, 1}}), e, 64);
  REQUIRE(jordan.size() == 64);
  CHECK(jordan[63] >= 1.0);
  CHECK(jordan[63] <= 1.1);
  // The estimate approaches the exact radius from above for the Jordan block.
  CHECK(jordan[63] < jordan[7]);
}

TEST_CASE("radius_estimate reports overflow") {
  const Calibration e = Calibration::euclidean(1);
  CHECK(code_of([&] { radius_estimate(real_matrix({{1e200}}), e, 8); }) == ErrorCode::Overflow);
}

TEST_CASE("neumann_inverse examples") {
  const Calibration e = Calibration::euclidean(2);
  CHECK(diff(neumann_inverse(0.5 * Matrix::identity(2), e).inverse, 2.0 * Matrix::identity(2)) < 1e-9);
  const Matrix nil = real_matrix({{0, 5}, {0, 0}});
  const NeumannResult r = neumann_inverse(nil, e);
  CHECK(diff(r.inverse, Matrix::identity(2) + nil) == 0.0);
  const Matrix t = real_matrix({{0.5, 0.1}, {0, 0.5}});
  const Eigen::MatrixXcd ref = (Eigen::MatrixXcd::Identity(2, 2) - qntest::to_eigen(t)).inverse();
  CHECK(diff(neumann_inverse(t, e).inverse, qntest::from_eigen(ref)) < 1e-9);
  CHECK(diff(neumann_inverse(t, e).inverse, real_matrix({{2, 0.4}, {0, 2}})) < 1e-9);
  CHECK(code_of([&] { neumann_inverse(real_matrix({{1, 1}, {0, 1}}), e); }) == ErrorCode::RadiusNotLessThanOne);
}

TEST_CASE("neumann_inverse uses the quotient radius, not the ambient one") {
  // Ambient spectral radius 3, but the only seminorm sees the 0.5 block.
  const Calibration c(2, {Seminorm("p", real_matrix({{1, 0}}))}, true);
  const Matrix t = diag({0.5, 3.0});
  CHECK(radius_exact(t, c) == doctest::Approx(0.5));
  const NeumannResult r = neumann_inverse(t, c);
  CHECK(r.residual <= 1e-9);
  CHECK(std::abs(r.inverse(0, 0) - Complex(2.0)) < 1e-9);
}

TEST_CASE("resolvent examples") {
  CHECK(diff(resolvent(Matrix::zeros(2, 2), 2.0), 0.5 * Matrix::identity(2)) < 1e-15);
  CHECK(diff(resolvent(diag({1, 2}), 3.0), diag({0.5, 1})) < 1e-15);
  const Matrix jordan = real_matrix({{1, 1}, {0, 1}});
  CHECK(diff(resolvent(jordan, 2.0), jordan) < 1e-15);
  CHECK(code_of([&] { resolvent(jordan, 1.0); }) == ErrorCode::SpectrumHit);
}

TEST_CASE("resolvent_derivative examples") {
  const Matrix t = diag({1, 2});
  CHECK(diff(resolvent_derivative(t, 3.0, 0), resolvent(t, 3.0)) == 0.0);
  CHECK(diff(resolvent_derivative(Matrix::zeros(2, 2), 1.0, 1), -1.0 * Matrix::identity(2)) < 1e-15);
  CHECK(diff(resolvent_derivative(t, 3.0, 2), 2.0 * diag({1.0 / 8, 1.0})) < 1e-14);
  CHECK(diff(resolvent_derivative(t, 3.0, 2), fd_derivative(t, 3.0, 2, 1e-3)) < 1e-5);
}

TEST_CASE("resolvent derivative against central differences") {
  Rng rng(14);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    const Matrix t = make_shared_semisimple(rng, n).t;
    // Sample well outside the spectrum (|eigenvalues| <= 1.5 in this corpus).
    const Complex lambda = std::polar(rng.uniform(3.0, 5.0), rng.uniform(0.0, 6.283));
    for (std::size_t order = 1; order <= 3; ++order) {
      // 1e-5(1+|lambda|) for n <= 2; at n = 3 rounding (eps / h^3) dominates
      // that step, so the balanced step eps^(1/5) is used instead.
      const double h = order <= 2 ? 1e-5 * (1 + std::abs(lambda)) : std::pow(eps, 0.2);
      const Matrix exact = resolvent_derivative(t, lambda, order);
      const Matrix approx = fd_derivative(t, lambda, order, h);
      CHECK(qntest::oracle_norm(exact - approx) <= 1e-5 * qntest::oracle_norm(exact));
    }
  }
}

TEST_CASE("resolvent identity") {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    const Matrix t = random_matrix(rng, n, n);
    const double r = spectral_radius(t);
    const Complex lambda = std::polar(r + rng.uniform(0.5, 3.0), rng.uniform(0.0, 6.283));
    const Complex mu = std::polar(r + rng.uniform(0.5, 3.0), rng.uniform(0.0, 6.283));
    const Matrix rl = resolvent(t, lambda);
    const Matrix rm = resolvent(t, mu);
    const Matrix lhs = rl - rm;
    const Matrix rhs = (mu - lambda) * (rl * rm);
    CHECK(qntest::oracle_norm(lhs - rhs) <= 1e-8 * (qntest::oracle_norm(rl) + qntest::oracle_norm(rm)));
  }
}

TEST_CASE("qp_spectrum examples") {
  const SpectralReport coord = qp_spectrum(diag({1, 2}), coordinates());
  REQUIRE(coord.qp_spectrum.size() == 2);
  CHECK(std::abs(coord.qp_spectrum[0].value - Complex(1.0)) < 1e-12);
  CHECK(coord.qp_spectrum[0].seminorms == std::vector<std::string>{"p1"});
  CHECK(std::abs(coord.qp_spectrum[1].value - Complex(2.0)) < 1e-12);
  CHECK(coord.qp_spectrum[1].seminorms == std::vector<std::string>{"p2"});
  CHECK(coord.radius_of_boundedness == doctest::Approx(2.0));
  CHECK(coord.regular);

  const SpectralReport eucl = qp_spectrum(diag({1, 2}), Calibration::euclidean(2));
  CHECK(hausdorff_distance(eucl.qp_values(), std::vector<Complex>{1.0, 2.0}) < 1e-12);

  // Jordan block with the coordinate seminorm whose null space span e1 is
  // invariant (T e1 = e1); the induced action is [1].
  const Matrix jordan_t = real_matrix({{1, 1}, {0, 1}});
  const Calibration mixed(2, {Seminorm("p", real_matrix({{0, 1}})), Seminorm("e", Matrix::identity(2))});
  const SpectralReport jordan = qp_spectrum(jordan_t, mixed);
  REQUIRE(jordan.qp_spectrum.size() == 1);
  CHECK(std::abs(jordan.qp_spectrum[0].value - Complex(1.0)) < 1e-12);
  CHECK(jordan.qp_spectrum[0].seminorms == std::vector<std::string>{"p", "e"});
  const QuotientOperator q = induced_operator(jordan_t, mixed[0]);
  CHECK(hausdorff_distance(qntest::oracle_eigenvalues(q.matrix), std::vector<Complex>{1.0}) < 1e-12);
}

TEST_CASE("qp_spectrum requires quotient boundedness") {
  CHECK(code_of([] { qp_spectrum(real_matrix({{0, 1}, {0, 0}}), coordinates()); }) == ErrorCode::NotQuotientBounded);
  // |x1| has null space span e2, which the Jordan block moves (T e2 = e1 + e2).
  const Calibration first(2, {Seminorm("p1", real_matrix({{1, 0}})), Seminorm("e", Matrix::identity(2))});
  CHECK(code_of([&] { qp_spectrum(real_matrix({{1, 1}, {0, 1}}), first); }) == ErrorCode::NotQuotientBounded);
}

TEST_CASE("union formula and radius identity on invariant-kernel cases") {
  Rng rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.index(6);
    const CalibratedOperator c = make_invariant_kernel_case(rng, n);
    const SpectralReport rep = qp_spectrum(c.t, c.calibration);
    CHECK(hausdorff_distance(rep.qp_values(), qntest::oracle_eigenvalues(c.t)) <= 1e-8);
    double max_mod = 0.0;
    for (const auto& cl : rep.qp_spectrum) max_mod = std::max(max_mod, std::abs(cl.value));
    CHECK(rep.radius_of_boundedness == doctest::Approx(max_mod).epsilon(1e-12));
    CHECK(radius_exact(c.t, c.calibration) == doctest::Approx(rep.radius_of_boundedness).epsilon(1e-12));
  }
}

TEST_CASE("resolvent_limits_check examples") {
  const Calibration e = Calibration::euclidean(2);
  const ResolventLimitReport zero = resolvent_limits_check(Matrix::zeros(2, 2), e, {10.0});
  REQUIRE(zero.rows.size() == 1);
  CHECK(zero.rows[0].max_resolvent == doctest::Approx(0.1));
  CHECK(zero.rows[0].max_deviation < 1e-15);
  const ResolventLimitReport d = resolvent_limits_check(diag({1, 2}), e, {100.0});
  CHECK(d.rows[0].max_resolvent <= 2.0 / 98.0);
  const ResolventLimitReport growing = resolvent_limits_check(real_matrix({{1, 1}, {0, 1}}), e, {10, 100, 1000});
  CHECK(growing.decreasing);
  CHECK(growing.rows[2].max_deviation < growing.rows[0].max_deviation);
  CHECK(code_of([&] { resolvent_limits_check(diag({1, 2}), e, {1.5}); }) == ErrorCode::InvalidArgument);
}

}  // TEST_SUITE
