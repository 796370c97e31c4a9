#pragma once

#include <Eigen/Dense>
#include <optional>

#include "haarint/log_value.hpp"
#include "haarint/matrix.hpp"

namespace haarint {

enum class SaddleStatus {
  kInteriorSaddle,     // interior maximum with positive exponent
  kNoInteriorSaddle,   // no interior critical point, bulk dominates
  kBoundaryDominated,  // interior critical point exists but its exponent
                       // is negative, so it does not dominate
};

const char* to_string(SaddleStatus s);

struct SaddleReport {
  ComplexMatrix saddle_location;
  double exponent_per_n = 0.0;    // coefficient of N in the exponent
  LogValue log_asymptotic_value;  // full asymptotic value incl. prefactor
  double prefactor_log = 0.0;     // log of the N-subexponential prefactor
  double hessian_min_abs_eigen = 0.0;
  double gradient_residual = 0.0;
  SaddleStatus status = SaddleStatus::kInteriorSaddle;
  bool hessian_reliable = true;   // false close to the degenerate edge
};

/// Diagonal quartic coupling of two equal-size blocks,
/// sum_x |a_xx|^2 |b_xx|^2. Non-negative; invariant under diagonal phase
/// rotations of either argument.
double quartic_functional(const ComplexMatrix& a, const ComplexMatrix& b);

/// Asymptotics of the block average of exp(N Re Tr(A Y)) for Hermitian Y.
/// The maximizer is A0 = Y / (sqrt(Y^2 + 1) + 1) by spectral calculus;
/// the exponent Tr(A0 Y) + log det(1 - A0^2) is strictly positive for
/// Y != 0 and zero for Y = 0.
SaddleReport linear_saddle(const ComplexMatrix& y, int n);

/// max-norm of the stationarity defect 2 A0 (1 - A0^2)^{-1} - Y.
double linear_maximizer_residual(const ComplexMatrix& y,
                                 const ComplexMatrix& a0);

struct QuarticConfig {
  double beta = 0.0;  // coupling strength; interior saddle needs beta > 4
  int q = 1;
  int n = 0;

  static QuarticConfig from_beta(double beta, int q, int n);
  /// beta = 4 q^3 / q_min^3 parametrization.
  static QuarticConfig from_q_min(double q_min, int q, int n);
};

/// Saddle radius c with c^2 = 1/2 + 1/2 sqrt(1 - 4/beta); needs beta >= 4.
double quartic_c(double beta);
double quartic_c_squared(double beta);
/// Inverse map beta = 1 / (c^2 (1 - c^2)) for 1/sqrt(2) <= c < 1.
double beta_of_c(double c);

/// Exponent value at the quartic critical radius,
/// c^2/(1-c^2) + 2 log(1-c^2) per site.
double quartic_exponent_per_site(double c_squared);

/// Asymptotics of the double block average of exp(beta N T(A, B)).
SaddleReport quartic_saddle(const QuarticConfig& cfg);

/// Coupling threshold beta* (root of the per-site exponent, ~4.911):
/// above it the interior saddle dominates the double integral.
double quartic_threshold();

/// Value and Wirtinger first derivatives of
/// g(A, B) = beta T(A, B) + log det(1 - A*A) + log det(1 - B*B).
/// d_a holds dg/dA entries; the derivative with respect to conj(A) is the
/// entrywise conjugate since g is real.
struct QuarticGradient {
  double value = 0.0;
  ComplexMatrix d_a, d_a_conj;
  ComplexMatrix d_b, d_b_conj;
};
QuarticGradient g_quartic(const ComplexMatrix& a, const ComplexMatrix& b,
                          double beta);

/// Covariance blocks of the quadratic expansion around the quartic
/// saddle: E couples the two diagonal real parts, F the off-diagonal
/// entry pairs. The determinant identities det(E)(1-c^2)^4/4 = 2c^2-1 and
/// det(F)(1-c^2)^4 = 1-c^4 fix the Gaussian prefactors; the 2q flat
/// directions are the diagonal phase gauge modes.
struct QuarticHessianBlocks {
  Eigen::Matrix2d e;
  Eigen::Matrix2d f;
  int zero_modes = 0;
  double prefactor_diag_times_n = 0.0;     // pi (1-c^2)^2 / sqrt(8c^2-4)
  double prefactor_offdiag_times_n = 0.0;  // pi (1-c^2)^2 / sqrt(1-c^4)
};
QuarticHessianBlocks quartic_hessian_blocks(double beta, int q);

/// c(q)^2 = 1/2 + 1/2 sqrt(1 - q_min^3 / q^3) for q >= q_min.
double c_squared_of_q(double q, double q_min);

/// Exponent-per-N of the dominant subsystem of size q,
/// h(q) = q (c(q)^2/(1-c(q)^2) + 2 log(1-c(q)^2)).
double h_of_q(double q, double q_min);

/// Numerical derivative of h. Central differences with step 1e-5 q in the
/// interior; at the left endpoint the step is one-sided and
/// sqrt-extrapolated because c(q) has a square-root cusp at q_min.
double h_prime(double q, double q_min);

/// h with the size cutoff q_bar: identical on [q_min, q_bar], affine with
/// slope c(q_bar)^2/(1-c(q_bar)^2) + 2 log(1-c(q_bar)^2) beyond.
double h_weighted(double q, double q_min, double q_bar);
double h_weighted_slope_after_cut(double q_min, double q_bar);

/// Prefactor alpha = (l^9 / (T eps^4)) * 4 / q_min^3; carries dimension
/// length^4 when l, T, eps are lengths.
double alpha_from_scales(double length_scale, double time_extent,
                         double regulator, double q_min);

/// Block average of exp(beta TrA*A) at q = 1 as the convergent series
/// sum_p beta^p (N-1)!/(N+p-1)!.
double exp_linear_series(double beta, int n);

/// Same family with the exponent scaled by N: quadrature value of
/// (N-1) Int_0^1 exp(beta N u)(1-u)^{N-2} du together with its
/// N -> infinity limit 1/(1-beta). Requires beta < 1.
struct ScaledExpIntegral {
  double value = 0.0;
  double limit = 0.0;
};
ScaledExpIntegral exp_linear_scaled(double beta, int n);

}  // namespace haarint
