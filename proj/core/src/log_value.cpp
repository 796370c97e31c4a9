#include "haarint/log_value.hpp"

#include <cmath>
#include <stdexcept>

namespace haarint {

LogValue LogValue::zero() {
  LogValue v;
  v.is_zero = true;
  v.log_magnitude = 0.0;
  return v;
}

LogValue LogValue::one() { return LogValue{}; }

LogValue LogValue::from_real(double x) {
  if (x == 0.0) return zero();
  LogValue v;
  v.log_magnitude = std::log(std::abs(x));
  v.phase = {x > 0 ? 1.0 : -1.0, 0.0};
  return v;
}

LogValue LogValue::from_log(double log_magnitude, std::complex<double> phase) {
  if (!std::isfinite(log_magnitude))
    throw std::invalid_argument("LogValue: non-finite log magnitude");
  double m = std::abs(phase);
  if (m == 0.0) throw std::invalid_argument("LogValue: zero phase");
  LogValue v;
  v.log_magnitude = log_magnitude;
  v.phase = phase / m;
  return v;
}

double LogValue::to_double() const {
  if (is_zero) return 0.0;
  if (std::abs(phase.imag()) > 1e-12)
    throw std::domain_error("LogValue: to_double on a non-real value");
  return phase.real() * std::exp(log_magnitude);
}

std::complex<double> LogValue::to_complex() const {
  if (is_zero) return {0.0, 0.0};
  return phase * std::exp(log_magnitude);
}

bool LogValue::is_real_positive() const {
  return !is_zero && std::abs(phase.imag()) <= 1e-12 && phase.real() > 0;
}

LogValue LogValue::operator*(const LogValue& other) const {
  if (is_zero || other.is_zero) return zero();
  return from_log(log_magnitude + other.log_magnitude, phase * other.phase);
}

LogValue LogValue::operator/(const LogValue& other) const {
  if (other.is_zero) throw std::domain_error("LogValue: division by zero");
  if (is_zero) return zero();
  return from_log(log_magnitude - other.log_magnitude, phase / other.phase);
}

LogValue& LogValue::operator*=(const LogValue& other) {
  *this = *this * other;
  return *this;
}

LogValue LogValue::pow(double exponent) const {
  if (is_zero) {
    if (exponent <= 0) throw std::domain_error("LogValue: 0^nonpositive");
    return zero();
  }
  if (!is_real_positive())
    throw std::domain_error("LogValue: pow requires a positive real value");
  return from_log(exponent * log_magnitude);
}

}  // namespace haarint
