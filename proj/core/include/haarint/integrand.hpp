#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "haarint/matrix.hpp"

namespace haarint {

/// Mixed moment of matrix entries: plain factors U^i_j and conjugated
/// factors conj(U^k_l). Indices are 0-based.
struct MomentPattern {
  std::vector<std::pair<int, int>> factors;
  std::vector<std::pair<int, int>> conj_factors;

  bool balanced() const { return factors.size() == conj_factors.size(); }
  int max_row() const;
  int max_col() const;
  void check_range(int n) const;
};

/// Declarative description of the test functionals of one block (or a
/// pair of blocks for the quartic exponential).
class IntegrandSpec {
 public:
  enum class Kind {
    kConstant,
    kMonomial,      // product of entries and conjugate entries
    kExpLinear,     // exp(scale * Re Tr(A Y))
    kExpGram,       // exp(beta * scale * Tr(A*A))
    kExpQuartic,    // exp(beta * scale * T(A, B)), pair integrand
    kDetPower,      // det(1 - A*A)^power
    kCallback,
    kPairCallback,  // user function of two blocks
  };

  static IntegrandSpec constant();
  static IntegrandSpec monomial(MomentPattern pattern);
  static IntegrandSpec exp_linear(ComplexMatrix y, bool scale_by_dim = true);
  static IntegrandSpec exp_gram_trace(double beta, bool scale_by_dim = false);
  static IntegrandSpec exp_quartic(double beta, bool scale_by_dim = true);
  static IntegrandSpec det_power(double power);
  static IntegrandSpec callback(
      std::function<std::complex<double>(const ComplexMatrix&)> fn);
  static IntegrandSpec pair_callback(
      std::function<std::complex<double>(const ComplexMatrix&,
                                         const ComplexMatrix&)> fn);

  Kind kind() const { return kind_; }
  bool can_eval_single() const {
    return kind_ != Kind::kExpQuartic && kind_ != Kind::kPairCallback;
  }
  bool can_eval_pair() const {
    return kind_ == Kind::kConstant || kind_ == Kind::kExpQuartic ||
           kind_ == Kind::kPairCallback;
  }
  bool is_shifted_exponential() const { return kind_ == Kind::kExpQuartic; }
  double beta() const { return beta_; }

  /// Value on a single block. The dimension n fixes the exponent scale
  /// for the N-scaled kinds.
  std::complex<double> eval(const ComplexMatrix& a, int n) const;

  /// Value on a pair of blocks (constant or pair-callback kinds).
  std::complex<double> eval_pair(const ComplexMatrix& a,
                                 const ComplexMatrix& b, int n) const;

  /// log of the (positive) pair integrand, exp-quartic only.
  double log_eval_pair(const ComplexMatrix& a, const ComplexMatrix& b,
                       int n) const;

  /// For q = 1 integrands that depend on |a|^2 only: log f as a function
  /// of u = |a|^2. Lets the radial quadrature run in one dimension and
  /// keeps huge exponents out of intermediate values.
  std::optional<std::function<double(double)>> radial_log_profile(int n) const;

 private:
  Kind kind_ = Kind::kConstant;
  MomentPattern pattern_;
  ComplexMatrix y_;
  double beta_ = 0.0;
  double power_ = 0.0;
  bool scale_by_dim_ = false;
  std::function<std::complex<double>(const ComplexMatrix&)> fn_;
  std::function<std::complex<double>(const ComplexMatrix&, const ComplexMatrix&)>
      pair_fn_;
};

}  // namespace haarint
