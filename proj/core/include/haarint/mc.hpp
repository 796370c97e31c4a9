#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>

#include "haarint/integrand.hpp"
#include "haarint/rng.hpp"

namespace haarint {

/// Monte Carlo result. When log_shift is nonzero the mean is of
/// exp(log integrand - log_shift), so the estimated quantity is
/// exp(log_shift) * mean.
struct MCEstimate {
  std::complex<double> mean{0.0, 0.0};
  double std_error = 0.0;
  std::size_t n_samples = 0;
  RngStream stream;
  double log_shift = 0.0;

  double real() const { return mean.real(); }
};

/// Worker threads used for chunked Monte Carlo; reads HAARINT_WORKERS,
/// defaults to the hardware concurrency. Results are bit-identical for
/// any worker count.
unsigned worker_count();

/// Samples per deterministic chunk; chunk i always uses substream i of
/// the base stream and the partial sums are reduced pairwise in chunk
/// order, independent of scheduling.
inline constexpr std::size_t kMCChunk = 8192;

/// Generic chunked driver: fn draws one value using the chunk generator.
MCEstimate run_chunked(const std::function<std::complex<double>(Rng&)>& fn,
                       std::size_t n_samples, RngStream stream);

/// Haar expectation of f over the leading q x q block of U(N).
MCEstimate integrate_single(const IntegrandSpec& f, int n, int q,
                            std::size_t n_samples, RngStream stream);

/// Double Haar integral of a pair integrand over two independent
/// unitaries. Exponential integrands are averaged as
/// exp(log integrand - shift); the shift is auto-probed when absent and
/// reported in the estimate.
MCEstimate integrate_double(const IntegrandSpec& g, int n, int q,
                            std::size_t n_samples, RngStream stream,
                            std::optional<double> log_shift = std::nullopt);

/// Mixed moment of matrix entries. Unbalanced conjugation counts give an
/// exact zero without sampling (phase invariance).
MCEstimate moment_monomial(const MomentPattern& pattern, int n,
                           std::size_t n_samples, RngStream stream);

}  // namespace haarint
