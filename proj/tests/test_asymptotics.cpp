#include <doctest.h>

#include <cmath>

#include "haarint/asymptotics.hpp"
#include "haarint/haar.hpp"
#include "haarint/mc.hpp"
#include "haarint/saddle.hpp"

using namespace haarint;

TEST_CASE("pairing formula, single factor") {
  MomentPattern p{{{0, 0}}, {{0, 0}}};
  CHECK(weingarten_leading(p, 10) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("pairing formula, two factors") {
  // distinct diagonal indices: only the identity permutation survives
  MomentPattern distinct{{{0, 0}, {1, 1}}, {{0, 0}, {1, 1}}};
  CHECK(weingarten_leading(distinct, 8) ==
        doctest::Approx(1.0 / 64.0).epsilon(1e-15));

  // all indices equal: both permutations contribute
  MomentPattern coincident{{{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}};
  CHECK(weingarten_leading(coincident, 8) ==
        doctest::Approx(2.0 / 64.0).epsilon(1e-15));
}

TEST_CASE("pairing formula vanishes without matching deltas") {
  // row index 2 never appears among the l indices
  MomentPattern p{{{2, 0}}, {{0, 0}}};
  CHECK(weingarten_leading(p, 8) == 0.0);
}

TEST_CASE("pairing formula is invariant under relabeling the slots") {
  MomentPattern p{{{0, 1}, {1, 0}, {2, 2}}, {{1, 1}, {0, 0}, {2, 2}}};
  MomentPattern swapped{{{1, 0}, {0, 1}, {2, 2}}, {{1, 1}, {0, 0}, {2, 2}}};
  CHECK(weingarten_leading(p, 12) == weingarten_leading(swapped, 12));
}

TEST_CASE("pairing enumeration cap") {
  MomentPattern big;
  for (int m = 0; m < 9; ++m) {
    big.factors.push_back({0, 0});
    big.conj_factors.push_back({0, 0});
  }
  CHECK_THROWS_WITH_AS(weingarten_leading(big, 16),
                       "weingarten_leading: enumeration cap exceeded",
                       std::invalid_argument);
}

TEST_CASE("gaussian expectation moments") {
  auto one = [](const ComplexMatrix&) { return std::complex<double>(1.0, 0.0); };
  MCEstimate c = gaussian_expectation(one, 2, 0, 1000, {31, 0});
  CHECK(c.mean.real() == doctest::Approx(1.0));

  auto abs_sq = [](const ComplexMatrix& a) {
    return std::complex<double>(std::norm(a(0, 0)), 0.0);
  };
  MCEstimate second = gaussian_expectation(abs_sq, 1, 2, 200000, {31, 1});
  CHECK(std::abs(second.mean.real() - 1.0) <= 4.0 * second.std_error);

  auto abs_quartic = [](const ComplexMatrix& a) {
    return std::complex<double>(std::norm(a(0, 0)) * std::norm(a(0, 0)), 0.0);
  };
  MCEstimate fourth = gaussian_expectation(abs_quartic, 1, 4, 400000, {31, 2});
  CHECK(std::abs(fourth.mean.real() - 2.0) <= 4.0 * fourth.std_error);
}

TEST_CASE("homogeneity declaration is verified by probing") {
  auto abs_sq = [](const ComplexMatrix& a) {
    return std::complex<double>(std::norm(a(0, 0)), 0.0);
  };
  CHECK_THROWS_WITH_AS(gaussian_expectation(abs_sq, 1, 3, 1000, {32, 0}),
                       "gaussian_expectation: homogeneity violation",
                       std::invalid_argument);
}

TEST_CASE("gaussian limit matches the entry-moment MC at finite N") {
  // E|U11|^4 = 2/(N(N+1)); the Gaussian value 2/N^2 deviates by O(1/N^3)
  auto abs_quartic = [](const ComplexMatrix& a) {
    return std::complex<double>(std::norm(a(0, 0)) * std::norm(a(0, 0)), 0.0);
  };
  MomentPattern p{{{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}};
  for (int n : {32, 64}) {
    MCEstimate gauss = gaussian_expectation(abs_quartic, 1, 4, 400000, {33, 0});
    MCEstimate haar = moment_monomial(p, n, 400000, {33, 1});
    const double gauss_scaled = gauss.mean.real() / (double(n) * n);
    const double se = std::hypot(gauss.std_error / (double(n) * n),
                                 haar.std_error);
    const double limit = std::max(4.0 * se, 5.0 / std::pow(n, 3));
    CHECK(std::abs(gauss_scaled - haar.mean.real()) <= limit);
  }
}

TEST_CASE("factorized expectation, product mode") {
  // f = 1, g = |D11|^2 at p = q = 1: product mode gives 1/N, and the full
  // moment |U22|^2 agrees
  const int n = 32;
  auto g = [](const ComplexMatrix& d) {
    return std::complex<double>(std::norm(d(0, 0)), 0.0);
  };
  FactorizedExpectation fe = factorized_expectation(
      IntegrandSpec::constant(), 1, g, 1, 2, n, FactorizationMode::kProduct,
      200000, {34, 0});
  CHECK(fe.block_factor.real() == doctest::Approx(1.0));
  CHECK(std::abs(fe.value.real() - 1.0 / n) <= 4.0 * std::max(fe.std_error, 1e-12));

  MomentPattern second_entry{{{1, 1}}, {{1, 1}}};
  MCEstimate full = moment_monomial(second_entry, n, 200000, {34, 1});
  const double se = std::hypot(fe.std_error, full.std_error);
  CHECK(std::abs(fe.value.real() - full.mean.real()) <= 4.0 * std::max(se, 1e-12));
}

TEST_CASE("factorized expectation, product vs saddle cross-route") {
  // f = exp(N Re(a y)) with y = 0.5, g = |D11|^2, p = q = 1, N = 64:
  // product mode should match saddle(y) * (1/N) within combined error
  const int n = 64;
  ComplexMatrix y(1, 1);
  y(0, 0) = 0.5;
  auto g = [](const ComplexMatrix& d) {
    return std::complex<double>(std::norm(d(0, 0)), 0.0);
  };
  FactorizedExpectation fe = factorized_expectation(
      IntegrandSpec::exp_linear(y, true), 1, g, 1, 2, n,
      FactorizationMode::kProduct, 400000, {35, 0});
  SaddleReport rep = linear_saddle(y, n);
  const double expected = rep.log_asymptotic_value.to_double() / n;
  // the saddle route itself carries an O(1/N) error; allow it on top of
  // the MC band
  const double tolerance = 4.0 * fe.std_error + 3.0 / n * expected;
  CHECK(std::abs(fe.value.real() - expected) <= tolerance);
}

TEST_CASE("factorized expectation with constant g reduces to the f integral") {
  const int n = 48;
  auto one = [](const ComplexMatrix&) { return std::complex<double>(1.0, 0.0); };
  const auto f = IntegrandSpec::det_power(2.0);
  FactorizedExpectation product = factorized_expectation(
      f, 1, one, 1, 0, n, FactorizationMode::kProduct, 100000, {38, 0});
  CHECK(product.gauss_factor.real() == doctest::Approx(1.0));
  CHECK(product.value.real() ==
        doctest::Approx(product.block_factor.real()).epsilon(1e-12));

  FactorizedExpectation coupled = factorized_expectation(
      f, 1, one, 1, 0, n, FactorizationMode::kCoupled, 100000, {38, 0});
  const double band = 4.0 * std::hypot(product.std_error, coupled.std_error) +
                      10.0 / n * std::abs(product.value.real());
  CHECK(std::abs(coupled.value.real() - product.value.real()) <= band);
}

TEST_CASE("factorized expectation, coupled mode agrees with product") {
  const int n = 64;
  auto g = [](const ComplexMatrix& d) {
    return std::complex<double>(std::norm(d(0, 0)), 0.0);
  };
  FactorizedExpectation product = factorized_expectation(
      IntegrandSpec::constant(), 1, g, 1, 2, n, FactorizationMode::kProduct,
      200000, {36, 0});
  FactorizedExpectation coupled = factorized_expectation(
      IntegrandSpec::constant(), 1, g, 1, 2, n, FactorizationMode::kCoupled,
      200000, {36, 0});
  CHECK(coupled.coupling_mean > 0.9);
  CHECK(coupled.coupling_mean <= 1.0);
  CHECK(coupled.coupling_min > 0.0);
  const double gap = std::abs(coupled.value.real() - product.value.real());
  const double band =
      4.0 * std::hypot(product.std_error, coupled.std_error) +
      10.0 / n * std::abs(product.value.real());
  CHECK(gap <= band);
}

TEST_CASE("dimension constraint") {
  auto g = [](const ComplexMatrix&) { return std::complex<double>(1.0, 0.0); };
  CHECK_THROWS_AS(
      factorized_expectation(IntegrandSpec::constant(), 2, g, 2, 0, 6,
                             FactorizationMode::kProduct, 100, {37, 0}),
      std::invalid_argument);
}
