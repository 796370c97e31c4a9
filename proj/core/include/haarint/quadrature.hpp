#pragma once

#include <functional>
#include <vector>

namespace haarint {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
  bool converged = true;
  double worst_point = 0.0;  // midpoint of the worst interval on failure
};

/// Adaptive Gauss-Kronrod (G7/K15) on [a, b]. Splits the worst interval
/// until the summed error estimate meets rel_tol * |integral| + abs_tol
/// or the interval budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol,
                                    double abs_tol = 0.0,
                                    int max_intervals = 8000);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// exact for polynomials of degree 2n - 1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

/// Integral of f over [a, b] with a fixed n-point Gauss-Legendre rule.
double integrate_gauss_legendre(const GaussLegendre& rule,
                                const std::function<double(double)>& f,
                                double a, double b);

}  // namespace haarint
