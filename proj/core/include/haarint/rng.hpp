#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace haarint {

/// Identifies a reproducible random stream. The same (seed, stream) pair
/// always produces bit-identical draws; distinct stream ids give
/// statistically independent streams. Monte Carlo drivers split a stream
/// further into per-chunk substreams, so results do not depend on how
/// many workers process the chunks.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Deterministic generator: mt19937_64 with an explicit Box-Muller
/// transform. std::normal_distribution is implementation-defined, which
/// would break bit-reproducibility across standard libraries, so the
/// normal draws are spelled out here.
class Rng {
 public:
  explicit Rng(RngStream stream, std::uint64_t substream = 0);

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Standard real normal, mean 0, variance 1.
  double normal();

  /// Standard complex normal with E|z|^2 = 1 (density exp(-|z|^2)/pi).
  std::complex<double> complex_normal();

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace haarint
