#include "haarint/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "haarint/haar.hpp"
#include "haarint/quadrature.hpp"
#include "haarint/saddle.hpp"

namespace haarint {

namespace {

constexpr double kPi = std::numbers::pi;

void check_reduction_dims(int n, int q) {
  if (q < 1) throw std::invalid_argument("q >= 1 required");
  if (n < 2 * q) throw std::invalid_argument("reduction requires N >= 2q");
}

}  // namespace

LogValue normalization_constant(int n, int q) {
  check_reduction_dims(n, q);
  const double log_pi_power = double(q) * q * std::log(kPi);
  if (auto exact = normalization_ratio_exact(n, q))
    return LogValue::from_log(log_pi_power + std::log(*exact));
  double log_ratio = 0.0;
  for (int k = 1; k <= q; ++k)
    log_ratio += std::lgamma(n - q - k + 1.0) - std::lgamma(n - k + 1.0);
  return LogValue::from_log(log_pi_power + log_ratio);
}

std::optional<double> normalization_ratio_exact(int n, int q) {
  if (n > 20) return std::nullopt;
  // (N-q-k)!/(N-k)! = 1 / ((N-q-k+1)(N-q-k+2)...(N-k)); the full ratio is
  // the reciprocal of a product of q^2 integers
  unsigned __int128 denom = 1;
  for (int k = 1; k <= q; ++k)
    for (int m = n - q - k + 1; m <= n - k; ++m) {
      const auto factor = static_cast<unsigned __int128>(m);
      if (denom > (~static_cast<unsigned __int128>(0)) / factor)
        return std::nullopt;  // would overflow 128 bits
      denom *= factor;
    }
  return 1.0 / static_cast<double>(denom);
}

double reduced_integral_q1(const IntegrandSpec& f, int n, ReductionMode mode,
                           double rel_tol) {
  check_reduction_dims(n, 1);
  const double weight_power = n - 2.0;
  const double prefactor =
      mode == ReductionMode::kExact ? (n - 1.0) : static_cast<double>(n);

  if (auto log_profile = f.radial_log_profile(n)) {
    // Int_disc g(|a|^2) dmu = pi Int_0^1 g(u) du
    auto integrand = [&](double u) {
      if (u <= 0.0 || u >= 1.0) u = std::clamp(u, 1e-300, 1.0 - 1e-16);
      return std::exp((*log_profile)(u) + weight_power * std::log1p(-u));
    };
    QuadratureResult quad = integrate_adaptive(integrand, 0.0, 1.0, rel_tol);
    if (!quad.converged)
      throw std::runtime_error("reduced_integral_q1: radial quadrature did not converge near u = " + std::to_string(quad.worst_point));
    return prefactor * quad.value;
  }

  // general f(a): polar 2D, outer radius, inner angle
  auto outer = [&](double r) {
    const double log_weight = weight_power * std::log1p(-r * r);
    auto inner = [&](double phi) {
      ComplexMatrix a(1, 1);
      a(0, 0) = std::polar(r, phi);
      return f.eval(a, n).real();
    };
    QuadratureResult angle =
        integrate_adaptive(inner, 0.0, 2.0 * kPi, 0.1 * rel_tol, 1e-300);
    return r * std::exp(log_weight) * angle.value;
  };
  QuadratureResult quad =
      integrate_adaptive(outer, 0.0, 1.0, rel_tol, 0.0, 2000);
  if (!quad.converged)
    throw std::runtime_error("reduced_integral_q1: quadrature did not converge near r = " + std::to_string(quad.worst_point));
  return prefactor / kPi * quad.value;
}

double detpower_integral_q2(int n, double rel_tol) {
  check_reduction_dims(n, 2);
  const int p = n - 4;
  // det(1 - A*A) = (1 - lam+)(1 - lam-) with
  // lam± = S ± 2 R sqrt(r^2 + Rhat^2 sin^2 theta), S = r^2 + R^2 + Rhat^2.
  // In R the integrand R^2 det^p is a polynomial of degree 4p + 2, so a
  // (2p + 2)-point Gauss-Legendre rule integrates it exactly.
  const GaussLegendre rule = gauss_legendre(2 * p + 2);

  auto inner_r = [&](double r, double rhat, double cos_t) {
    const double t = r * r + rhat * rhat * (1.0 - cos_t * cos_t);
    const double sqrt_t = std::sqrt(t);
    const double r_max = std::sqrt(1.0 - rhat * rhat * cos_t * cos_t) - sqrt_t;
    if (r_max <= 0.0) return 0.0;
    auto poly = [&](double R) {
      const double s = r * r + R * R + rhat * rhat;
      const double det = (1.0 - s) * (1.0 - s) - 4.0 * R * R * t;
      return R * R * std::pow(det, p);
    };
    return integrate_gauss_legendre(rule, poly, 0.0, r_max);
  };

  // outer three dimensions adaptively; cos(theta) is symmetric
  auto integrand_r = [&](double r) {
    auto integrand_rhat = [&](double rhat) {
      auto integrand_cos = [&](double cos_t) { return inner_r(r, rhat, cos_t); };
      QuadratureResult ct =
          integrate_adaptive(integrand_cos, 0.0, 1.0, 0.03 * rel_tol, 1e-300);
      return 2.0 * rhat * rhat * ct.value;
    };
    const double rhat_max = std::sqrt(std::max(0.0, 1.0 - r * r));
    QuadratureResult rh = integrate_adaptive(integrand_rhat, 0.0, rhat_max,
                                             0.1 * rel_tol, 1e-300);
    return r * rh.value;
  };
  QuadratureResult quad =
      integrate_adaptive(integrand_r, 0.0, 1.0, 0.3 * rel_tol, 0.0, 400);
  if (!quad.converged)
    throw std::runtime_error("detpower_integral_q2: quadrature did not converge near r = " + std::to_string(quad.worst_point));
  return 256.0 * kPi * kPi * kPi * quad.value;
}

LogValue pair_exp_quartic_integral_q1(double beta, int n, double rel_tol) {
  check_reduction_dims(n, 1);
  if (!(beta > 0)) throw std::invalid_argument("beta > 0 required");
  // shift by the exponent maximum so every point evaluation stays O(1)
  double shift = 0.0;
  if (beta > 4.0)
    shift = std::max(0.0, n * quartic_exponent_per_site(quartic_c_squared(beta)));

  auto outer = [&](double r) {
    const double log_wr = (n - 2.0) * std::log1p(-r * r);
    auto inner = [&](double s) {
      const double log_val = beta * n * r * r * s * s + log_wr +
                             (n - 2.0) * std::log1p(-s * s) - shift;
      return std::exp(log_val) * s;
    };
    QuadratureResult qs = integrate_adaptive(inner, 0.0, 1.0, 0.1 * rel_tol, 1e-300);
    return r * qs.value;
  };
  QuadratureResult quad = integrate_adaptive(outer, 0.0, 1.0, rel_tol, 0.0, 2000);
  if (!quad.converged)
    throw std::runtime_error("pair_exp_quartic_integral_q1: quadrature did not converge near r = " + std::to_string(quad.worst_point));
  return LogValue::from_log(shift + std::log(4.0 * (n - 1.0) * (n - 1.0) * quad.value));
}

MCEstimate reduced_expectation(const IntegrandSpec& f, int n, int q,
                               std::size_t n_samples, RngStream stream) {
  if (2 * q > n) throw std::invalid_argument("reduction requires N >= 2q");
  return integrate_single(f, n, q, n_samples, stream);
}

LeadingIntegral leading_reduced_integral(const IntegrandSpec& f, int n, int q,
                                         std::size_t mc_samples,
                                         RngStream stream) {
  check_reduction_dims(n, q);
  LeadingIntegral out;
  if (q == 1) {
    const double v = reduced_integral_q1(f, n, ReductionMode::kLeading);
    out.value = LogValue::from_real(v);
    out.route = "quadrature-q1";
    return out;
  }
  if (q == 2 && f.kind() == IntegrandSpec::Kind::kConstant) {
    const double ball = detpower_integral_q2(n);
    const double log_pref = 4.0 * std::log(n / kPi);
    out.value = LogValue::from_log(log_pref + std::log(ball));
    out.route = "quadrature-q2";
    return out;
  }
  // No deterministic parametrization for this case: block sampling gives
  // E[f] under the normalized weight; multiply back the weight mass and
  // the leading prefactor.
  MCEstimate est = reduced_expectation(f, n, q, mc_samples, stream);
  const LogValue mass = normalization_constant(n, q);
  const double log_pref = double(q) * q * std::log(n / kPi);
  const LogValue scale = LogValue::from_log(log_pref + mass.log_magnitude);
  out.value = LogValue::from_real(est.mean.real()) * scale;
  out.std_error = est.std_error * std::exp(scale.log_magnitude);
  out.route = "mc";
  out.mc_fallback = true;
  return out;
}

}  // namespace haarint
