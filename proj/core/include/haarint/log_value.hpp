#pragma once

#include <complex>

namespace haarint {

/// Sign-and-log representation of numbers whose magnitude scales like
/// exp(const * N), which overflow doubles already for moderate N.
/// A value is either zero (is_zero set) or phase * exp(log_magnitude)
/// with |phase| = 1.
struct LogValue {
  double log_magnitude = 0.0;
  std::complex<double> phase = {1.0, 0.0};
  bool is_zero = false;

  static LogValue zero();
  static LogValue one();
  static LogValue from_real(double x);
  static LogValue from_log(double log_magnitude,
                           std::complex<double> phase = {1.0, 0.0});

  /// Converts back to a plain double; may overflow to +/-inf or
  /// underflow to 0 for large |log_magnitude|. Requires a real phase.
  double to_double() const;
  std::complex<double> to_complex() const;

  bool is_real_positive() const;

  LogValue operator*(const LogValue& other) const;
  LogValue operator/(const LogValue& other) const;
  LogValue& operator*=(const LogValue& other);

  /// Raises to a real power. Requires a positive real value.
  LogValue pow(double exponent) const;
};

}  // namespace haarint
