#include "haarint/rng.hpp"

#include <cmath>
#include <numbers>

namespace haarint {

Rng::Rng(RngStream stream, std::uint64_t substream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(stream.seed), static_cast<std::uint32_t>(stream.seed >> 32),
      static_cast<std::uint32_t>(stream.stream), static_cast<std::uint32_t>(stream.stream >> 32),
      static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)};
  gen_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

std::complex<double> Rng::complex_normal() {
  // Re and Im each have variance 1/2, giving E|z|^2 = 1.
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  return {kInvSqrt2 * normal(), kInvSqrt2 * normal()};
}

}  // namespace haarint
