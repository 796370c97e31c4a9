#pragma once

#include <complex>
#include <functional>

#include "haarint/integrand.hpp"
#include "haarint/mc.hpp"

namespace haarint {

/// Largest factor count for the exact permutation sum (8! terms).
inline constexpr std::size_t kMaxPairingFactors = 8;

/// Leading large-N pairing value of the mixed moment described by the
/// pattern: N^{-p} sum over permutations sigma of
/// prod_m [i_m == l_sigma(m)] [k_sigma(m) == j_m].
/// Exact combinatorial sum, no sampling. Requires p <= 8.
double weingarten_leading(const MomentPattern& pattern, int n);

/// Gaussian average pi^{-q^2} Int f(A~) exp(-Tr A~*A~) dmu over q x q
/// matrices of independent standard complex Gaussians, estimated by MC.
/// f must be homogeneous of the declared degree (checked by probe
/// scaling); dividing the result by N^{d/2} gives the Haar asymptotic.
MCEstimate gaussian_expectation(
    const std::function<std::complex<double>(const ComplexMatrix&)>& f, int q,
    int degree, std::size_t n_samples, RngStream stream);

enum class FactorizationMode { kProduct, kCoupled };

struct FactorizedExpectation {
  FactorizationMode mode = FactorizationMode::kProduct;
  std::complex<double> value{0.0, 0.0};
  double std_error = 0.0;
  // product mode pieces
  std::complex<double> block_factor{0.0, 0.0};  // Haar-side integral of f
  double block_factor_se = 0.0;
  std::complex<double> gauss_factor{0.0, 0.0};  // g-side / N^{d/2}
  double gauss_factor_se = 0.0;
  // coupled mode reweighting diagnostics
  double coupling_mean = 1.0;
  double coupling_min = 1.0;
};

/// Two-subspace factorization: product mode multiplies the single-block
/// integral of f (over the q x q block) with the Gaussian asymptotics of
/// g (over the p x p block); coupled mode evaluates the double ball
/// integral with the coupling determinant as a multiplicative
/// reweighting of independently sampled blocks. Requires 2(p + q) <= N.
FactorizedExpectation factorized_expectation(
    const IntegrandSpec& f, int q,
    const std::function<std::complex<double>(const ComplexMatrix&)>& g, int p,
    int g_degree, int n, FactorizationMode mode, std::size_t n_samples,
    RngStream stream);

}  // namespace haarint
