#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "haarint/reduction.hpp"
#include "haarint/saddle.hpp"

using namespace haarint;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("normalization constant closed forms") {
  CHECK(normalization_constant(10, 1).to_double() ==
        doctest::Approx(kPi / 9.0).epsilon(1e-14));
  CHECK(normalization_constant(6, 2).to_double() ==
        doctest::Approx(std::pow(kPi, 4) / 240.0).epsilon(1e-14));
  CHECK(normalization_constant(4, 2).to_double() ==
        doctest::Approx(std::pow(kPi, 4) / 12.0).epsilon(1e-14));
  CHECK_THROWS_WITH_AS(normalization_constant(3, 2),
                       "reduction requires N >= 2q", std::invalid_argument);
}

TEST_CASE("exact integer ratios at small N") {
  // the ratio is the reciprocal of an integer product and must come out
  // bit-exact
  CHECK(*normalization_ratio_exact(10, 1) == 1.0 / 9.0);
  CHECK(*normalization_ratio_exact(6, 2) == 1.0 / 240.0);  // (4*5)(3*4)
  CHECK(*normalization_ratio_exact(4, 2) == 1.0 / 12.0);   // (2*3)(1*2)
}

TEST_CASE("exact integer path agrees with log-gamma for small N") {
  for (int n = 4; n <= 20; ++n)
    for (int q = 1; 2 * q <= n; ++q) {
      auto exact = normalization_ratio_exact(n, q);
      if (!exact) continue;
      double log_ratio = 0.0;
      for (int k = 1; k <= q; ++k)
        log_ratio += std::lgamma(n - q - k + 1.0) - std::lgamma(n - k + 1.0);
      CHECK(std::log(*exact) == doctest::Approx(log_ratio).epsilon(1e-13));
    }
  // above the exact window the log-gamma path takes over seamlessly
  CHECK(normalization_ratio_exact(21, 1) == std::nullopt);
  CHECK(normalization_constant(21, 1).to_double() ==
        doctest::Approx(kPi / 20.0).epsilon(1e-13));
}

TEST_CASE("normalization approaches the leading prefactor like 1/N") {
  // normalization_constant(N, q) (N/pi)^{q^2} = 1 + O(1/N); check the
  // log-log slope of the deviation
  for (int q : {1, 2}) {
    std::vector<double> lx, ly;
    for (int n : {50, 100, 200, 400}) {
      const double v = std::exp(normalization_constant(n, q).log_magnitude +
                                double(q) * q * std::log(n / kPi));
      lx.push_back(std::log(n));
      ly.push_back(std::log(std::abs(v - 1.0)));
    }
    const double n_pts = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double slope = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.15));
  }
}

TEST_CASE("q=1 reduced integral, radial paths") {
  // probability normalization
  CHECK(reduced_integral_q1(IntegrandSpec::constant(), 10, ReductionMode::kExact) ==
        doctest::Approx(1.0).epsilon(1e-10));

  // exp(beta u) at beta=1, N=2 collapses to int_0^1 e^u du = e - 1
  CHECK(reduced_integral_q1(IntegrandSpec::exp_gram_trace(1.0, false), 2,
                            ReductionMode::kExact, 1e-12) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));

  // exp(beta u) at N=500 matches the convergent series 1 + beta/N + ...
  const double series = exp_linear_series(0.5, 500);
  CHECK(reduced_integral_q1(IntegrandSpec::exp_gram_trace(0.5, false), 500,
                            ReductionMode::kExact) ==
        doctest::Approx(series).epsilon(1e-8));
  CHECK(series == doctest::Approx(1.0 + 0.5 / 500).epsilon(1e-5));
}

TEST_CASE("q=1 reduced integral, general 2D path") {
  // a non-radial integrand: exp(N y Re a); cross-check leading mode
  // against the saddle value only loosely, and exact vs leading by the
  // (N-1)/N prefactor
  ComplexMatrix y(1, 1);
  y(0, 0) = 0.4;
  const auto f = IntegrandSpec::exp_linear(y, true);
  const int n = 60;
  const double exact = reduced_integral_q1(f, n, ReductionMode::kExact, 1e-9);
  const double leading = reduced_integral_q1(f, n, ReductionMode::kLeading, 1e-9);
  CHECK(exact / leading == doctest::Approx((n - 1.0) / n).epsilon(1e-9));
}

TEST_CASE("q=2 determinant power integral matches the constant") {
  for (int n = 4; n <= 12; ++n) {
    const double quad = detpower_integral_q2(n);
    const double constant = normalization_constant(n, 2).to_double();
    CHECK(quad == doctest::Approx(constant).epsilon(1e-5));
  }
}

TEST_CASE("pairwise route agreement for the weight mass") {
  // MC over Haar blocks vs deterministic quadrature vs closed form, q=1
  const int n = 9;
  const IntegrandSpec f = IntegrandSpec::constant();
  MCEstimate mc = reduced_expectation(f, n, 1, 100000, {21, 0});
  const double quad = reduced_integral_q1(f, n, ReductionMode::kExact);
  CHECK(std::abs(mc.mean.real() - quad) <= 4.0 * std::max(mc.std_error, 1e-8));

  // Tr(A*A) at q=3: the Gaussian limit gives q^2/N to leading order
  const int q = 3, big_n = 20;
  auto trace_gram = IntegrandSpec::callback([](const ComplexMatrix& a) {
    return std::complex<double>(a.squaredNorm(), 0.0);
  });
  MCEstimate tg = reduced_expectation(trace_gram, big_n, q, 100000, {21, 1});
  // exact E Tr(A*A) = q^2/N by the single-entry moment
  CHECK(std::abs(tg.mean.real() - double(q) * q / big_n) <= 4.0 * tg.std_error);
}

TEST_CASE("|det A|^2 cross-route consistency at q=2") {
  const int n = 12, q = 2;
  auto abs_det_sq = IntegrandSpec::callback([](const ComplexMatrix& a) {
    return std::complex<double>(std::norm(a.determinant()), 0.0);
  });
  MCEstimate one = reduced_expectation(abs_det_sq, n, q, 200000, {22, 0});
  MCEstimate two = integrate_single(abs_det_sq, n, q, 200000, {22, 1});
  const double se = std::hypot(one.std_error, two.std_error);
  CHECK(std::abs(one.mean.real() - two.mean.real()) <= 4.0 * se);
}

TEST_CASE("leading reduced integral routes") {
  // f = 1 at q = 1: quadrature gives exactly N/(N-1)
  LeadingIntegral a =
      leading_reduced_integral(IntegrandSpec::constant(), 10, 1);
  CHECK(a.route == "quadrature-q1");
  CHECK(a.value.to_double() == doctest::Approx(10.0 / 9.0).epsilon(1e-9));

  // and is 1 + O(1/N) for N = 100 (exact value N/(N-1) = 1.0101...)
  LeadingIntegral b =
      leading_reduced_integral(IntegrandSpec::constant(), 100, 1);
  CHECK(b.value.to_double() == doctest::Approx(100.0 / 99.0).epsilon(1e-9));
  CHECK(std::abs(b.value.to_double() - 1.0) <= 1.2 / 100.0);

  // |a|^2 at q = 1, N = 100: within 2% of 1/N
  MomentPattern p{{{0, 0}}, {{0, 0}}};
  LeadingIntegral c =
      leading_reduced_integral(IntegrandSpec::monomial(p), 100, 1);
  CHECK(c.value.to_double() == doctest::Approx(0.01).epsilon(0.02));

  // q = 2 determinant weight goes through the 4D quadrature
  LeadingIntegral d =
      leading_reduced_integral(IntegrandSpec::constant(), 8, 2);
  CHECK(d.route == "quadrature-q2");
  CHECK(!d.mc_fallback);

  // generic q = 3 falls back to MC with the warning flag; the route must
  // reproduce E[f] times the exact weight mass and leading prefactor
  const int n = 12, q = 3;
  auto trace_gram = IntegrandSpec::callback([](const ComplexMatrix& a) {
    return std::complex<double>(a.squaredNorm(), 0.0);
  });
  LeadingIntegral e = leading_reduced_integral(trace_gram, n, q, 100000, {23, 0});
  CHECK(e.route == "mc");
  CHECK(e.mc_fallback);
  const double scale = std::exp(normalization_constant(n, q).log_magnitude +
                                double(q) * q * std::log(n / kPi));
  const double expected = double(q) * q / n * scale;  // E Tr(A*A) = q^2/N
  CHECK(std::abs(e.value.to_double() - expected) <= 4.0 * e.std_error);
}

TEST_CASE("pair quartic quadrature against the saddle regime") {
  // beta <= 4 keeps the value near 1
  CHECK(pair_exp_quartic_integral_q1(0.5, 40).to_double() ==
        doctest::Approx(1.0).epsilon(0.1));
  // far above threshold the log value tracks N * per-site exponent
  const double beta = 10.0;
  const int n = 300;
  const double expected = n * quartic_exponent_per_site(quartic_c_squared(beta));
  const double log_quad = pair_exp_quartic_integral_q1(beta, n).log_magnitude;
  CHECK(log_quad == doctest::Approx(expected).epsilon(0.05));
}
