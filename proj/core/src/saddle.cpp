#include "haarint/saddle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "haarint/linalg.hpp"
#include "haarint/quadrature.hpp"

namespace haarint {

namespace {

// per-site exponent as a function of s = c^2
double phi(double s) { return s / (1.0 - s) + 2.0 * std::log1p(-s); }

void require_positive(double v, const char* what) {
  if (!(v > 0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

const char* to_string(SaddleStatus s) {
  switch (s) {
    case SaddleStatus::kInteriorSaddle: return "interior-saddle";
    case SaddleStatus::kNoInteriorSaddle: return "no-interior-saddle";
    case SaddleStatus::kBoundaryDominated: return "boundary-dominated";
  }
  return "unknown";
}

double quartic_functional(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("quartic_functional: size mismatch");
  double sum = 0.0;
  for (Eigen::Index x = 0; x < a.rows(); ++x)
    sum += std::norm(a(x, x)) * std::norm(b(x, x));
  return sum;
}

SaddleReport linear_saddle(const ComplexMatrix& y, int n) {
  if (y.rows() != y.cols() || y.rows() == 0)
    throw std::invalid_argument("linear_saddle: square Y required");
  if (max_abs(y - y.adjoint()) > 1e-12)
    throw std::invalid_argument("linear_saddle: Y must be Hermitian");
  const Eigen::Index q = y.rows();

  HermitianEigen ey = eigh((y + y.adjoint()) / 2.0);
  Eigen::VectorXd a0_eigen(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const double yi = ey.values(i);
    a0_eigen(i) = yi / (std::sqrt(yi * yi + 1.0) + 1.0);
  }

  SaddleReport report;
  report.saddle_location =
      ey.vectors * a0_eigen.asDiagonal() * ey.vectors.adjoint();

  double exponent = 0.0;
  double prefactor = 0.0;
  double min_eigen = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q; ++i) {
    const double li = a0_eigen(i);
    exponent += ey.values(i) * li + std::log1p(-li * li);
    for (Eigen::Index j = 0; j < q; ++j) {
      const double lj = a0_eigen(j);
      prefactor += -0.5 * std::log1p(-li * li * lj * lj);
      const double denom = (1.0 - li * li) * (1.0 - lj * lj);
      min_eigen = std::min(min_eigen, (1.0 - std::abs(li * lj)) / denom);
    }
  }

  report.exponent_per_n = exponent;
  report.prefactor_log = prefactor;
  report.log_asymptotic_value = LogValue::from_log(n * exponent + prefactor);
  report.hessian_min_abs_eigen = min_eigen;
  report.gradient_residual = linear_maximizer_residual(y, report.saddle_location);
  report.status = SaddleStatus::kInteriorSaddle;
  return report;
}

double linear_maximizer_residual(const ComplexMatrix& y,
                                 const ComplexMatrix& a0) {
  const Eigen::Index q = a0.rows();
  ComplexMatrix one_minus = ComplexMatrix::Identity(q, q) - a0 * a0;
  ComplexMatrix defect = 2.0 * a0 * one_minus.inverse() - y;
  return max_abs(defect);
}

QuarticConfig QuarticConfig::from_beta(double beta, int q, int n) {
  require_positive(beta, "beta");
  if (q < 1) throw std::invalid_argument("q >= 1 required");
  if (n < 2 * q) throw std::invalid_argument("N >= 2q required");
  return {beta, q, n};
}

QuarticConfig QuarticConfig::from_q_min(double q_min, int q, int n) {
  require_positive(q_min, "q_min");
  const double beta = 4.0 * std::pow(static_cast<double>(q) / q_min, 3);
  return from_beta(beta, q, n);
}

double quartic_c_squared(double beta) {
  if (beta < 4.0) throw std::domain_error("no interior saddle: beta < 4");
  return 0.5 + 0.5 * std::sqrt(1.0 - 4.0 / beta);
}

double quartic_c(double beta) { return std::sqrt(quartic_c_squared(beta)); }

double beta_of_c(double c) {
  const double s = c * c;
  if (!(s >= 0.5 && s < 1.0))
    throw std::domain_error("beta_of_c: need 1/sqrt(2) <= c < 1");
  return 1.0 / (s * (1.0 - s));
}

double quartic_exponent_per_site(double c_squared) { return phi(c_squared); }

SaddleReport quartic_saddle(const QuarticConfig& cfg) {
  SaddleReport report;
  const int q = cfg.q;
  if (cfg.beta <= 4.0) {
    report.status = SaddleStatus::kNoInteriorSaddle;
    report.saddle_location = ComplexMatrix::Zero(q, q);
    report.log_asymptotic_value = LogValue::one();
    report.hessian_reliable = cfg.beta < 4.0;  // exactly 4 sits on the edge
    return report;
  }

  const double s = quartic_c_squared(cfg.beta);
  const double c = std::sqrt(s);
  const double per_site = phi(s);
  report.saddle_location = c * ComplexMatrix::Identity(q, q);
  report.exponent_per_n = q * per_site;
  report.hessian_reliable = (2.0 * s - 1.0) >= 1e-8;

  const double edge = 2.0 * s - 1.0;
  report.prefactor_log =
      q * std::log(2.0 * std::numbers::pi * cfg.n) -
      double(q) * q * std::log1p(-s * s) +
      q * std::log((1.0 + s) / (1.0 - s) * s / std::sqrt(edge));
  report.log_asymptotic_value =
      LogValue::from_log(cfg.n * report.exponent_per_n + report.prefactor_log);

  QuarticHessianBlocks blocks = quartic_hessian_blocks(cfg.beta, q);
  double min_eigen = std::numeric_limits<double>::infinity();
  min_eigen = std::min(min_eigen,
                       Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(blocks.e)
                           .eigenvalues().cwiseAbs().minCoeff());
  min_eigen = std::min(min_eigen,
                       Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(blocks.f)
                           .eigenvalues().cwiseAbs().minCoeff());
  report.hessian_min_abs_eigen = min_eigen;

  QuarticGradient grad =
      g_quartic(report.saddle_location, report.saddle_location, cfg.beta);
  report.gradient_residual = std::max(max_abs(grad.d_a), max_abs(grad.d_b));

  report.status = per_site > 0 ? SaddleStatus::kInteriorSaddle
                               : SaddleStatus::kBoundaryDominated;
  return report;
}

double quartic_threshold() {
  // root of phi on c^2 in (1/2, 1); phi(1/2) = 1 - 2 log 2 < 0 and
  // phi -> +inf at 1.
  double lo = 0.5, hi = 1.0 - 1e-12;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  const double s = 0.5 * (lo + hi);
  return 1.0 / (s * (1.0 - s));
}

QuarticGradient g_quartic(const ComplexMatrix& a, const ComplexMatrix& b,
                          double beta) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("g_quartic: size mismatch");
  if (!in_ball(a) || !in_ball(b))
    throw std::domain_error("outside ball domain");
  const Eigen::Index q = a.rows();

  QuarticGradient out;
  out.value = beta * quartic_functional(a, b) +
              log_det_one_minus_gram(a, 1.0).log_magnitude +
              log_det_one_minus_gram(b, 1.0).log_magnitude;

  // d/dA log det(1 - A*A) = -conj(A (1 - A*A)^{-1})
  auto logdet_grad = [q](const ComplexMatrix& m) -> ComplexMatrix {
    ComplexMatrix gram = ComplexMatrix::Identity(q, q) - m.adjoint() * m;
    return -(m * gram.inverse()).conjugate();
  };
  out.d_a = logdet_grad(a);
  out.d_b = logdet_grad(b);
  for (Eigen::Index x = 0; x < q; ++x) {
    out.d_a(x, x) += beta * std::conj(a(x, x)) * std::norm(b(x, x));
    out.d_b(x, x) += beta * std::conj(b(x, x)) * std::norm(a(x, x));
  }
  out.d_a_conj = out.d_a.conjugate();
  out.d_b_conj = out.d_b.conjugate();
  return out;
}

QuarticHessianBlocks quartic_hessian_blocks(double beta, int q) {
  if (beta <= 4.0) throw std::domain_error("no interior saddle: beta <= 4");
  const double s = quartic_c_squared(beta);
  const double d = 1.0 - s;
  QuarticHessianBlocks out;
  out.e << 2.0 * s / (d * d), -2.0 / d, -2.0 / d, 2.0 * s / (d * d);
  out.f << 1.0 / (d * d), s / (d * d), s / (d * d), 1.0 / (d * d);
  out.zero_modes = 2 * q;
  out.prefactor_diag_times_n =
      std::numbers::pi * d * d / std::sqrt(8.0 * s - 4.0);
  out.prefactor_offdiag_times_n =
      std::numbers::pi * d * d / std::sqrt(1.0 - s * s);
  return out;
}

double c_squared_of_q(double q, double q_min) {
  require_positive(q_min, "q_min");
  if (q < q_min) throw std::domain_error("h domain: q >= q_min required");
  const double ratio = std::pow(q_min / q, 3);
  return 0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - ratio));
}

double h_of_q(double q, double q_min) {
  return q * phi(c_squared_of_q(q, q_min));
}

double h_prime(double q, double q_min) {
  const double step = 1e-5 * q;
  if (q - step > q_min)
    return (h_of_q(q + step, q_min) - h_of_q(q - step, q_min)) / (2.0 * step);
  // Left endpoint: c(q) has a sqrt cusp at q_min, so the one-sided
  // difference quotient expands in powers of sqrt(step). Two levels of
  // extrapolation over steps (d, d/4, d/16) remove the sqrt(d) and d
  // error terms.
  const double h0 = h_of_q(q, q_min);
  auto quotient = [&](double d) { return (h_of_q(q + d, q_min) - h0) / d; };
  const double r1 = 2.0 * quotient(step / 4.0) - quotient(step);
  const double r2 = 2.0 * quotient(step / 16.0) - quotient(step / 4.0);
  return (4.0 * r2 - r1) / 3.0;
}

double h_weighted(double q, double q_min, double q_bar) {
  if (q_bar < q_min) throw std::invalid_argument("h_weighted: q_bar >= q_min required");
  return q * phi(c_squared_of_q(std::min(q, q_bar), q_min));
}

double h_weighted_slope_after_cut(double q_min, double q_bar) {
  return phi(c_squared_of_q(q_bar, q_min));
}

double alpha_from_scales(double length_scale, double time_extent,
                         double regulator, double q_min) {
  require_positive(length_scale, "length scale");
  require_positive(time_extent, "time extent");
  require_positive(regulator, "regulator scale");
  require_positive(q_min, "q_min");
  return std::pow(length_scale, 9) /
         (time_extent * std::pow(regulator, 4)) * 4.0 /
         std::pow(q_min, 3);
}

double exp_linear_series(double beta, int n) {
  if (n < 2) throw std::invalid_argument("exp_linear_series: N >= 2 required");
  double term = 1.0, sum = 1.0;
  for (int p = 1; p < 100000; ++p) {
    term *= beta / (n + p - 1.0);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

ScaledExpIntegral exp_linear_scaled(double beta, int n) {
  if (n < 2) throw std::invalid_argument("exp_linear_scaled: N >= 2 required");
  if (beta >= 1.0)
    throw std::domain_error(
        "geometric regime violated: scaled mode requires beta < 1");
  auto integrand = [beta, n](double u) {
    return std::exp(beta * n * u + (n - 2) * std::log1p(-u));
  };
  QuadratureResult quad = integrate_adaptive(integrand, 0.0, 1.0, 1e-11);
  return {(n - 1.0) * quad.value, 1.0 / (1.0 - beta)};
}

}  // namespace haarint
