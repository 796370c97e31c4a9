#include "haarint/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "haarint/linalg.hpp"
#include "haarint/saddle.hpp"

namespace haarint {

int MomentPattern::max_row() const {
  int m = -1;
  for (const auto& [i, j] : factors) m = std::max(m, i);
  for (const auto& [k, l] : conj_factors) m = std::max(m, k);
  return m;
}

int MomentPattern::max_col() const {
  int m = -1;
  for (const auto& [i, j] : factors) m = std::max(m, j);
  for (const auto& [k, l] : conj_factors) m = std::max(m, l);
  return m;
}

void MomentPattern::check_range(int n) const {
  auto in_range = [n](const std::pair<int, int>& e) {
    return e.first >= 0 && e.first < n && e.second >= 0 && e.second < n;
  };
  for (const auto& e : factors)
    if (!in_range(e)) throw std::out_of_range("moment pattern: index out of range");
  for (const auto& e : conj_factors)
    if (!in_range(e)) throw std::out_of_range("moment pattern: index out of range");
}

IntegrandSpec IntegrandSpec::constant() { return IntegrandSpec{}; }

IntegrandSpec IntegrandSpec::monomial(MomentPattern pattern) {
  IntegrandSpec s;
  s.kind_ = Kind::kMonomial;
  s.pattern_ = std::move(pattern);
  return s;
}

IntegrandSpec IntegrandSpec::exp_linear(ComplexMatrix y, bool scale_by_dim) {
  if (!is_hermitian(y))
    throw std::invalid_argument("exp_linear: Y must be Hermitian");
  IntegrandSpec s;
  s.kind_ = Kind::kExpLinear;
  s.y_ = std::move(y);
  s.scale_by_dim_ = scale_by_dim;
  return s;
}

IntegrandSpec IntegrandSpec::exp_gram_trace(double beta, bool scale_by_dim) {
  IntegrandSpec s;
  s.kind_ = Kind::kExpGram;
  s.beta_ = beta;
  s.scale_by_dim_ = scale_by_dim;
  return s;
}

IntegrandSpec IntegrandSpec::exp_quartic(double beta, bool scale_by_dim) {
  if (!(beta > 0)) throw std::invalid_argument("exp_quartic: beta > 0 required");
  IntegrandSpec s;
  s.kind_ = Kind::kExpQuartic;
  s.beta_ = beta;
  s.scale_by_dim_ = scale_by_dim;
  return s;
}

IntegrandSpec IntegrandSpec::det_power(double power) {
  IntegrandSpec s;
  s.kind_ = Kind::kDetPower;
  s.power_ = power;
  return s;
}

IntegrandSpec IntegrandSpec::callback(
    std::function<std::complex<double>(const ComplexMatrix&)> fn) {
  IntegrandSpec s;
  s.kind_ = Kind::kCallback;
  s.fn_ = std::move(fn);
  return s;
}

IntegrandSpec IntegrandSpec::pair_callback(
    std::function<std::complex<double>(const ComplexMatrix&,
                                       const ComplexMatrix&)> fn) {
  IntegrandSpec s;
  s.kind_ = Kind::kPairCallback;
  s.pair_fn_ = std::move(fn);
  return s;
}

std::complex<double> IntegrandSpec::eval(const ComplexMatrix& a, int n) const {
  switch (kind_) {
    case Kind::kConstant:
      return 1.0;
    case Kind::kMonomial: {
      std::complex<double> prod = 1.0;
      for (const auto& [i, j] : pattern_.factors) prod *= a(i, j);
      for (const auto& [k, l] : pattern_.conj_factors) prod *= std::conj(a(k, l));
      return prod;
    }
    case Kind::kExpLinear: {
      const double scale = scale_by_dim_ ? n : 1.0;
      return std::exp(scale * (a * y_).trace().real());
    }
    case Kind::kExpGram: {
      const double scale = scale_by_dim_ ? n : 1.0;
      return std::exp(beta_ * scale * a.squaredNorm());
    }
    case Kind::kDetPower:
      return std::exp(log_det_one_minus_gram(a, power_).log_magnitude);
    case Kind::kCallback:
      return fn_(a);
    case Kind::kExpQuartic:
    case Kind::kPairCallback:
      throw std::logic_error("pair integrand evaluated on a single block");
  }
  throw std::logic_error("unreachable");
}

std::complex<double> IntegrandSpec::eval_pair(const ComplexMatrix& a,
                                              const ComplexMatrix& b,
                                              int n) const {
  switch (kind_) {
    case Kind::kConstant:
      return 1.0;
    case Kind::kPairCallback:
      return pair_fn_(a, b);
    case Kind::kExpQuartic:
      return std::exp(log_eval_pair(a, b, n));
    default:
      throw std::logic_error("eval_pair: not a pair integrand");
  }
}

double IntegrandSpec::log_eval_pair(const ComplexMatrix& a,
                                    const ComplexMatrix& b, int n) const {
  if (kind_ != Kind::kExpQuartic)
    throw std::logic_error("log_eval_pair: exp_quartic only");
  const double scale = scale_by_dim_ ? n : 1.0;
  return beta_ * scale * quartic_functional(a, b);
}

std::optional<std::function<double(double)>> IntegrandSpec::radial_log_profile(
    int n) const {
  switch (kind_) {
    case Kind::kConstant:
      return [](double) { return 0.0; };
    case Kind::kExpGram: {
      const double coeff = beta_ * (scale_by_dim_ ? n : 1.0);
      return [coeff](double u) { return coeff * u; };
    }
    case Kind::kDetPower: {
      const double p = power_;
      return [p](double u) { return p * std::log1p(-u); };
    }
    case Kind::kMonomial: {
      // |a|^(2m) at q = 1 when every factor hits the single entry and the
      // conjugation counts match
      if (!pattern_.balanced()) return std::nullopt;
      if (pattern_.max_row() > 0 || pattern_.max_col() > 0) return std::nullopt;
      const double m = static_cast<double>(pattern_.factors.size());
      return [m](double u) { return m * std::log(u); };
    }
    case Kind::kExpLinear:
      if (y_.rows() == 1 && std::abs(y_(0, 0)) == 0.0)
        return [](double) { return 0.0; };
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace haarint
