#pragma once

#include <optional>
#include <string>

#include "haarint/integrand.hpp"
#include "haarint/log_value.hpp"
#include "haarint/mc.hpp"

namespace haarint {

/// pi^{q^2} (N-q-1)! ... (N-2q)! / ((N-1)! ... (N-q)!), the total mass of
/// the ball weight det(1 - A*A)^{N-2q}. Requires N >= 2q. Uses exact
/// integer arithmetic for N <= 20 where the denominator fits, log-gamma
/// otherwise.
LogValue normalization_constant(int n, int q);

/// The factorial ratio of the constant above (without the pi power) as
/// an exact rational evaluated in integer arithmetic; nullopt when the
/// product does not fit 128 bits. Exactness reference for small N.
std::optional<double> normalization_ratio_exact(int n, int q);

enum class ReductionMode {
  kExact,    // (N-1)/pi prefactor: exact probability normalization
  kLeading,  // N/pi prefactor: leading large-N form, 1 + O(1/N)
};

/// Weighted integral over the unit disc (q = 1),
/// prefac * Int f(a) (1 - |a|^2)^{N-2} dmu_C(a),
/// by 1D radial quadrature when f depends on |a|^2 only, otherwise by a
/// nested 2D polar quadrature. Exponents are evaluated in log form so
/// N-scaled integrands cannot overflow pointwise.
double reduced_integral_q1(const IntegrandSpec& f, int n, ReductionMode mode,
                           double rel_tol = 1e-8);

/// Int over the q = 2 ball of det(1 - A*A)^{N-4}, via the exact 4D polar
/// reduction (innermost R integral done with an exact Gauss-Legendre
/// rule, outer three adaptive). Equals normalization_constant(N, 2).
double detpower_integral_q2(int n, double rel_tol = 1e-5);

/// Double Haar integral of exp(beta N T(a, b)) at q = 1 via the exact
/// polar reduction 4 (N-1)^2 Int Int exp(beta N r^2 s^2) w(r) w(s) r s.
/// Deterministic counterpart of the double MC and the quartic saddle;
/// evaluated in log form since the value grows like exp(const N).
LogValue pair_exp_quartic_integral_q1(double beta, int n,
                                      double rel_tol = 1e-8);

/// Statistical evaluation of the ball-reduced expectation by sampling
/// blocks of Haar unitaries; exact in distribution for every q.
MCEstimate reduced_expectation(const IntegrandSpec& f, int n, int q,
                               std::size_t n_samples, RngStream stream);

struct LeadingIntegral {
  LogValue value;
  double std_error = 0.0;  // only for the MC fallback route
  std::string route;       // "quadrature-q1" | "quadrature-q2" | "mc"
  bool mc_fallback = false;
  // The value carries the 1 + O(1/N) caveat of the leading reduction.
};

/// (N/pi)^{q^2} Int f det(1 - A*A)^{N-2q} dmu. Deterministic quadrature
/// for the supported q = 1 integrands and the q = 2 determinant power;
/// anything else falls back to block MC with a warning flag.
LeadingIntegral leading_reduced_integral(const IntegrandSpec& f, int n, int q,
                                         std::size_t mc_samples = 100000,
                                         RngStream stream = {});

}  // namespace haarint
