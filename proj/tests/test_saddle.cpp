#include <doctest.h>

#include <cmath>
#include <numbers>

#include "haarint/haar.hpp"
#include "haarint/linalg.hpp"
#include "haarint/reduction.hpp"
#include "haarint/saddle.hpp"

using namespace haarint;

namespace {

ComplexMatrix random_hermitian(int q, Rng& rng) {
  ComplexMatrix g(q, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < q; ++i) g(i, j) = rng.complex_normal();
  return (g + g.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("quartic functional basics") {
  const int q = 3;
  const double c = 0.6;
  ComplexMatrix cid = c * ComplexMatrix::Identity(q, q);
  CHECK(quartic_functional(cid, cid) ==
        doctest::Approx(q * std::pow(c, 4)).epsilon(1e-14));

  // strictly off-diagonal arguments contribute nothing
  ComplexMatrix off = ComplexMatrix::Zero(q, q);
  off(0, 1) = 0.7;
  off(2, 0) = {0.1, 0.4};
  CHECK(quartic_functional(off, cid) == 0.0);

  // diagonal phase rotations leave the value unchanged
  Rng rng({41, 0});
  ComplexMatrix a = 0.5 * sample_block(8, q, rng);
  ComplexMatrix b = 0.5 * sample_block(8, q, rng);
  ComplexMatrix phases = ComplexMatrix::Zero(q, q);
  for (int i = 0; i < q; ++i) phases(i, i) = std::polar(1.0, 0.3 + 0.7 * i);
  CHECK(quartic_functional(phases * a, b) ==
        doctest::Approx(quartic_functional(a, b)).epsilon(1e-12));
}

TEST_CASE("linear saddle at Y = 0") {
  ComplexMatrix y = ComplexMatrix::Zero(2, 2);
  SaddleReport rep = linear_saddle(y, 50);
  CHECK(max_abs(rep.saddle_location) == 0.0);
  CHECK(rep.exponent_per_n == 0.0);
  CHECK(rep.log_asymptotic_value.to_double() == doctest::Approx(1.0));
}

TEST_CASE("linear saddle scalar closed form") {
  ComplexMatrix y(1, 1);
  y(0, 0) = 1.0;
  SaddleReport rep = linear_saddle(y, 10);
  const double a0 = std::sqrt(2.0) - 1.0;
  CHECK(rep.saddle_location(0, 0).real() == doctest::Approx(a0).epsilon(1e-12));
  CHECK(rep.exponent_per_n ==
        doctest::Approx(a0 + std::log1p(-a0 * a0)).epsilon(1e-12));
  CHECK(rep.exponent_per_n == doctest::Approx(0.225988).epsilon(1e-5));
  CHECK(rep.exponent_per_n > 0.0);
}

TEST_CASE("linear maximizer residual") {
  ComplexMatrix y0 = ComplexMatrix::Zero(1, 1);
  CHECK(linear_maximizer_residual(y0, ComplexMatrix::Zero(1, 1)) == 0.0);

  ComplexMatrix y(1, 1);
  y(0, 0) = 1.0;
  ComplexMatrix a0(1, 1);
  a0(0, 0) = std::sqrt(2.0) - 1.0;
  CHECK(linear_maximizer_residual(y, a0) <= 1e-12);

  Rng rng({42, 0});
  for (int trial = 0; trial < 25; ++trial) {
    ComplexMatrix h = random_hermitian(3, rng);
    SaddleReport rep = linear_saddle(h, 100);
    CHECK(rep.gradient_residual <= 1e-10);
  }
}

TEST_CASE("linear saddle positivity dichotomy") {
  Rng rng({43, 0});
  for (int trial = 0; trial < 50; ++trial) {
    const int q = 1 + static_cast<int>(rng.uniform() * 3);
    ComplexMatrix h = random_hermitian(q, rng);
    const double norm = std::exp(std::log(1e-3) + rng.uniform() * std::log(1e4));
    h *= norm / std::max(1e-300, spectral_norm(h));
    SaddleReport rep = linear_saddle(h, 64);
    CHECK(rep.exponent_per_n > 0.0);
  }
}

TEST_CASE("linear saddle is unitarily covariant") {
  Rng rng({44, 0});
  ComplexMatrix h = random_hermitian(3, rng);
  ComplexMatrix w = sample_unitary(3, rng);
  SaddleReport base = linear_saddle(h, 80);
  SaddleReport rotated = linear_saddle(w.adjoint() * h * w, 80);
  CHECK(std::abs(base.exponent_per_n - rotated.exponent_per_n) <= 1e-10);
  CHECK(std::abs(base.log_asymptotic_value.log_magnitude -
                 rotated.log_asymptotic_value.log_magnitude) <= 1e-10);
  CHECK(max_abs(w.adjoint() * base.saddle_location * w -
                rotated.saddle_location) <= 1e-10);
}

TEST_CASE("linear saddle rejects non-Hermitian input") {
  ComplexMatrix y(2, 2);
  y.setZero();
  y(0, 1) = 1.0;
  CHECK_THROWS_AS(linear_saddle(y, 10), std::invalid_argument);
}

TEST_CASE("linear saddle tracks the quadrature at O(1/N)") {
  ComplexMatrix y(1, 1);
  y(0, 0) = 0.8;
  double prev_gap = 1.0;
  for (int n : {100, 200, 400}) {
    SaddleReport rep = linear_saddle(y, n);
    const double quad = reduced_integral_q1(IntegrandSpec::exp_linear(y, true),
                                            n, ReductionMode::kLeading, 1e-10);
    const double gap = std::abs(rep.log_asymptotic_value.to_double() / quad - 1.0);
    CHECK(gap < prev_gap);
    if (n == 200) CHECK(gap <= 0.03);
    prev_gap = gap;
  }
}

TEST_CASE("quartic radius maps") {
  CHECK(quartic_c_squared(4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(quartic_c_squared(8.0) ==
        doctest::Approx(0.5 + 0.5 * std::sqrt(0.5)).epsilon(1e-15));
  CHECK(beta_of_c(std::sqrt(0.9)) == doctest::Approx(100.0 / 9.0).epsilon(1e-13));
  CHECK(beta_of_c(quartic_c(8.0)) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(quartic_c(3.9), "no interior saddle: beta < 4",
                       std::domain_error);
  CHECK_THROWS_AS(beta_of_c(0.5), std::domain_error);
}

TEST_CASE("quartic saddle report") {
  // below the existence edge
  SaddleReport none = quartic_saddle(QuarticConfig::from_beta(2.0, 1, 30));
  CHECK(none.status == SaddleStatus::kNoInteriorSaddle);

  // between 4 and the positivity threshold: reported but not dominant
  SaddleReport weak = quartic_saddle(QuarticConfig::from_beta(4.5, 1, 30));
  CHECK(weak.status == SaddleStatus::kBoundaryDominated);
  CHECK(weak.exponent_per_n < 0.0);

  // comfortably above the threshold
  SaddleReport strong = quartic_saddle(QuarticConfig::from_beta(8.0, 2, 40));
  CHECK(strong.status == SaddleStatus::kInteriorSaddle);
  CHECK(strong.exponent_per_n > 0.0);
  CHECK(strong.gradient_residual <= 1e-10);
  CHECK(strong.hessian_reliable);
  CHECK(strong.hessian_min_abs_eigen > 0.0);

  // exponent is linear in q
  SaddleReport q1 = quartic_saddle(QuarticConfig::from_beta(8.0, 1, 40));
  CHECK(strong.exponent_per_n ==
        doctest::Approx(2.0 * q1.exponent_per_n).epsilon(1e-14));

  // at the degenerate edge beta = 4 the Gaussian prefactor breaks down
  SaddleReport edge = quartic_saddle(QuarticConfig::from_beta(4.0, 1, 30));
  CHECK(edge.status == SaddleStatus::kNoInteriorSaddle);
  CHECK(!edge.hessian_reliable);
}

TEST_CASE("quartic saddle against the 2D quadrature") {
  double prev_gap = 1.0;
  for (int n : {100, 200}) {
    SaddleReport rep = quartic_saddle(QuarticConfig::from_beta(8.0, 1, n));
    LogValue quad = pair_exp_quartic_integral_q1(8.0, n);
    const double gap = std::abs(std::expm1(
        rep.log_asymptotic_value.log_magnitude - quad.log_magnitude));
    if (n == 100) CHECK(gap <= 0.05);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("quartic threshold") {
  const double beta_star = quartic_threshold();
  CHECK(beta_star >= 4.910);
  CHECK(beta_star <= 4.912);
  CHECK(std::abs(quartic_exponent_per_site(quartic_c_squared(beta_star))) <= 1e-10);
  CHECK(quartic_exponent_per_site(quartic_c_squared(beta_star + 0.1)) > 0.0);
  CHECK(quartic_exponent_per_site(quartic_c_squared(beta_star - 0.1)) < 0.0);
}

TEST_CASE("quartic configuration from q_min") {
  QuarticConfig cfg = QuarticConfig::from_q_min(2.0, 4, 30);
  CHECK(cfg.beta == doctest::Approx(4.0 * 8.0).epsilon(1e-15));
}

TEST_CASE("g_quartic value and stationarity") {
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  CHECK(g_quartic(zero, zero, 5.0).value == 0.0);

  const double beta = 8.0;
  const double c = quartic_c(beta);
  for (int q : {1, 3}) {
    ComplexMatrix cid = c * ComplexMatrix::Identity(q, q);
    QuarticGradient grad = g_quartic(cid, cid, beta);
    CHECK(max_abs(grad.d_a) <= 1e-10);
    CHECK(max_abs(grad.d_b) <= 1e-10);
    CHECK(grad.value ==
          doctest::Approx(q * quartic_exponent_per_site(c * c)).epsilon(1e-12));
    CHECK(max_abs(grad.d_a_conj - grad.d_a.conjugate()) == 0.0);
  }

  ComplexMatrix outside = 1.2 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(g_quartic(outside, zero, beta), std::domain_error);
}

TEST_CASE("g_quartic gradient against central differences") {
  Rng rng({45, 0});
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int q = 1 + static_cast<int>(rng.uniform() * 2);
    const double beta = 6.0;
    ComplexMatrix a = 0.9 * sample_block(2 * q + 2, q, rng);
    ComplexMatrix b = 0.9 * sample_block(2 * q + 2, q, rng);
    QuarticGradient grad = g_quartic(a, b, beta);
    const double step = 1e-6;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        ComplexMatrix ap = a, am = a;
        ap(i, j) += step;
        am(i, j) -= step;
        const double d_re =
            (g_quartic(ap, b, beta).value - g_quartic(am, b, beta).value) /
            (2 * step);
        worst = std::max(worst, std::abs(d_re - 2.0 * grad.d_a(i, j).real()));
        ComplexMatrix bp = b, bm = b;
        bp(i, j) += std::complex<double>(0.0, step);
        bm(i, j) -= std::complex<double>(0.0, step);
        const double d_im =
            (g_quartic(a, bp, beta).value - g_quartic(a, bm, beta).value) /
            (2 * step);
        worst = std::max(worst, std::abs(d_im + 2.0 * grad.d_b(i, j).imag()));
      }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("quartic hessian blocks") {
  const double beta = 8.0;
  const double s = quartic_c_squared(beta);
  const double d4 = std::pow(1.0 - s, 4);
  for (int q : {1, 3}) {
    QuarticHessianBlocks blocks = quartic_hessian_blocks(beta, q);
    CHECK(blocks.e.determinant() * d4 / 4.0 ==
          doctest::Approx(2.0 * s - 1.0).epsilon(1e-12));
    CHECK(blocks.f.determinant() * d4 ==
          doctest::Approx(1.0 - s * s).epsilon(1e-12));
    CHECK(blocks.zero_modes == 2 * q);
    CHECK(blocks.prefactor_diag_times_n ==
          doctest::Approx(std::numbers::pi * std::pow(1.0 - s, 2) /
                          std::sqrt(8.0 * s - 4.0))
              .epsilon(1e-12));
  }
  CHECK_THROWS_AS(quartic_hessian_blocks(3.0, 1), std::domain_error);
}

TEST_CASE("h function endpoint values") {
  for (double q_min : {1.0, 4.0}) {
    CHECK(h_of_q(q_min, q_min) ==
          doctest::Approx(q_min * (1.0 - 2.0 * std::log(2.0))).epsilon(1e-12));
    CHECK(h_prime(q_min, q_min) ==
          doctest::Approx(4.0 - 2.0 * std::log(2.0)).epsilon(1e-4));
  }
  CHECK_THROWS_AS(h_of_q(0.9, 1.0), std::domain_error);
}

TEST_CASE("h is strictly increasing and convex past the endpoint") {
  const double q_min = 1.0;
  double prev = h_of_q(q_min, q_min);
  double prev_diff = 0.0;
  bool first = true;
  for (int i = 1; i < 200; ++i) {
    const double q = q_min + (50.0 - 1.0) * q_min * i / 199.0;
    const double h = h_of_q(q, q_min);
    CHECK(h > prev);
    const double diff = h - prev;
    if (!first) CHECK(diff > 0.0);
    // convexity: second difference positive away from the cusp
    if (i > 2) CHECK(diff >= prev_diff * (1.0 - 1e-9));
    prev_diff = diff;
    prev = h;
    first = false;
  }
}

TEST_CASE("weighted h freezes past the cut") {
  const double q_min = 2.0, q_bar = 2.1;
  // below the cut nothing changes
  CHECK(h_weighted(2.05, q_min, q_bar) == h_of_q(2.05, q_min));
  // beyond, affine with the closed-form slope
  const double slope = h_weighted_slope_after_cut(q_min, q_bar);
  const double fd = h_weighted(q_bar + 1.0, q_min, q_bar) -
                    h_weighted(q_bar, q_min, q_bar);
  CHECK(std::abs(fd - slope) <= 1e-8);
  CHECK(slope < 0.0);  // q_bar close to q_min keeps c^2 below threshold

  // argmax over a grid containing the cut is the cut
  double best_q = q_min, best_h = -1e300;
  for (int i = 0; i <= 1000; ++i) {
    const double q = q_min + (8.0 - q_min) * i / 1000.0;
    const double h = h_weighted(q, q_min, q_bar);
    if (h > best_h) {
      best_h = h;
      best_q = q;
    }
  }
  CHECK(std::abs(best_q - q_bar) <= (8.0 - q_min) / 1000.0);
}

TEST_CASE("alpha prefactor scalings") {
  CHECK(alpha_from_scales(1.0, 1.0, 1.0, 1.0) == doctest::Approx(4.0));
  const double base = alpha_from_scales(1.0, 2.0, 0.5, 3.0);
  CHECK(alpha_from_scales(2.0, 2.0, 0.5, 3.0) ==
        doctest::Approx(512.0 * base).epsilon(1e-12));
  CHECK(alpha_from_scales(1.0, 2.0, 0.5, 6.0) ==
        doctest::Approx(base / 8.0).epsilon(1e-12));
  CHECK_THROWS_AS(alpha_from_scales(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("exponential example, unscaled and scaled") {
  CHECK(exp_linear_series(1.0, 2) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(exp_linear_series(0.0, 7) == 1.0);

  ScaledExpIntegral scaled = exp_linear_scaled(0.5, 1000);
  CHECK(scaled.limit == doctest::Approx(2.0));
  CHECK(std::abs(scaled.value / scaled.limit - 1.0) <= 0.005);
  CHECK_THROWS_WITH_AS(exp_linear_scaled(1.0, 100),
                       "geometric regime violated: scaled mode requires beta < 1",
                       std::domain_error);
}
