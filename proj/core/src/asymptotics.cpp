#include "haarint/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "haarint/haar.hpp"
#include "haarint/linalg.hpp"
#include "haarint/reduction.hpp"

namespace haarint {

double weingarten_leading(const MomentPattern& pattern, int n) {
  if (!pattern.balanced())
    throw std::invalid_argument("weingarten_leading: balanced pattern required");
  const std::size_t p = pattern.factors.size();
  if (p > kMaxPairingFactors)
    throw std::invalid_argument("weingarten_leading: enumeration cap exceeded");
  pattern.check_range(n);
  if (p == 0) return 1.0;

  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  long surviving = 0;
  do {
    bool ok = true;
    for (std::size_t m = 0; m < p && ok; ++m) {
      const auto& [i, j] = pattern.factors[m];
      const auto& [k, l] = pattern.conj_factors[static_cast<std::size_t>(perm[m])];
      ok = (i == l) && (k == j);
    }
    if (ok) ++surviving;
  } while (std::next_permutation(perm.begin(), perm.end()));

  return static_cast<double>(surviving) *
         std::pow(static_cast<double>(n), -static_cast<double>(p));
}

namespace {

ComplexMatrix gaussian_square(int q, Rng& rng) {
  ComplexMatrix m(q, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < q; ++i) m(i, j) = rng.complex_normal();
  return m;
}

void check_homogeneous(
    const std::function<std::complex<double>(const ComplexMatrix&)>& f, int q,
    int degree, RngStream stream) {
  Rng rng(stream, ~std::uint64_t{0} - 2);
  const double factor = std::exp2(degree);
  for (int probe = 0; probe < 3; ++probe) {
    const ComplexMatrix a = gaussian_square(q, rng);
    const std::complex<double> f1 = f(a);
    const std::complex<double> f2 = f(2.0 * a);
    const double scale = std::abs(f1) + std::abs(f2) + 1.0;
    if (std::abs(f2 - factor * f1) > 1e-8 * scale)
      throw std::invalid_argument("gaussian_expectation: homogeneity violation");
  }
}

}  // namespace

MCEstimate gaussian_expectation(
    const std::function<std::complex<double>(const ComplexMatrix&)>& f, int q,
    int degree, std::size_t n_samples, RngStream stream) {
  if (q < 1) throw std::invalid_argument("gaussian_expectation: q >= 1 required");
  if (degree < 0) throw std::invalid_argument("gaussian_expectation: degree >= 0");
  check_homogeneous(f, q, degree, stream);
  // sampling from the normalized density exp(-Tr A*A)/pi^{q^2} makes the
  // integral a plain average
  return run_chunked([&f, q](Rng& rng) { return f(gaussian_square(q, rng)); },
                     n_samples, stream);
}

FactorizedExpectation factorized_expectation(
    const IntegrandSpec& f, int q,
    const std::function<std::complex<double>(const ComplexMatrix&)>& g, int p,
    int g_degree, int n, FactorizationMode mode, std::size_t n_samples,
    RngStream stream) {
  if (2 * (p + q) > n)
    throw std::invalid_argument("factorized_expectation: 2(p+q) <= N required");

  FactorizedExpectation out;
  out.mode = mode;

  if (mode == FactorizationMode::kProduct) {
    MCEstimate f_side = integrate_single(f, n, q, n_samples, stream);
    RngStream g_stream{stream.seed, stream.stream + (1ull << 32)};
    MCEstimate g_side = gaussian_expectation(g, p, g_degree, n_samples, g_stream);
    const double n_scale = std::pow(static_cast<double>(n), -0.5 * g_degree);
    out.block_factor = f_side.mean;
    out.block_factor_se = f_side.std_error;
    out.gauss_factor = g_side.mean * n_scale;
    out.gauss_factor_se = g_side.std_error * n_scale;
    out.value = out.block_factor * out.gauss_factor;
    // first-order error propagation for the product
    out.std_error = std::hypot(std::abs(out.block_factor) * out.gauss_factor_se,
                               std::abs(out.gauss_factor) * out.block_factor_se);
    return out;
  }

  // Coupled: the double ball integral of f g weights / det(1 - A*A (x) D*D),
  // evaluated by sampling the two blocks independently and reweighting by
  // the coupling determinant. The exact weight masses convert the sample
  // average back to the leading-normalized integral.
  MCEstimate core = run_chunked(
      [&](Rng& rng) {
        const ComplexMatrix a = sample_block(n, q, rng);
        const ComplexMatrix d = sample_block(n, p, rng);
        return f.eval(a, n) * g(d) / coupling_det(a, d);
      },
      n_samples, stream);

  // (N/pi)^{q^2 + p^2} * Z_q * Z_p, the ratio between the normalized
  // sampling measure and the leading-order weight in the factorization
  const LogValue zq = normalization_constant(n, q);
  const LogValue zp = normalization_constant(n, p);
  const double log_scale =
      (double(q) * q + double(p) * p) * std::log(n / std::numbers::pi) +
      zq.log_magnitude + zp.log_magnitude;
  const double scale = std::exp(log_scale);
  out.value = core.mean * scale;
  out.std_error = core.std_error * scale;

  // coupling determinant statistics over a fixed probe set
  Rng probe(stream, ~std::uint64_t{0} - 3);
  double sum = 0.0, minimum = 1.0;
  constexpr int kProbes = 4096;
  for (int s = 0; s < kProbes; ++s) {
    const ComplexMatrix a = sample_block(n, q, probe);
    const ComplexMatrix d = sample_block(n, p, probe);
    const double c = coupling_det(a, d);
    sum += c;
    minimum = std::min(minimum, c);
  }
  out.coupling_mean = sum / kProbes;
  out.coupling_min = minimum;
  return out;
}

}  // namespace haarint
