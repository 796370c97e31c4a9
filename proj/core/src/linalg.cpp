#include "haarint/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace haarint {

double det_realified(const ComplexMatrix& x) {
  if (x.rows() != x.cols() || x.rows() == 0)
    throw std::invalid_argument("det_realified: square matrix required");
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = x.real();
  r.topRightCorner(n, n) = -x.imag();
  r.bottomLeftCorner(n, n) = x.imag();
  r.bottomRightCorner(n, n) = x.real();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(r);
  if (!lu.isInvertible()) throw std::domain_error("det_realified: singular input");
  return lu.determinant();
}

std::vector<double> ball_squared_singular_values(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  std::vector<double> sq(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) >= 1.0 - kBallTolerance)
      throw std::domain_error("outside ball domain");
    // singular values come out descending; store ascending
    sq[static_cast<std::size_t>(s.size() - 1 - i)] = s(i) * s(i);
  }
  return sq;
}

double coupling_det(const ComplexMatrix& a, const ComplexMatrix& d) {
  const auto asq = ball_squared_singular_values(a);
  const auto dsq = ball_squared_singular_values(d);
  double prod = 1.0;
  for (double ai : asq)
    for (double dj : dsq) prod *= 1.0 - ai * dj;
  return prod;
}

LogValue log_det_one_minus_gram(const ComplexMatrix& a, double power) {
  const auto sq = ball_squared_singular_values(a);
  double log_det = 0.0;
  for (double s : sq) log_det += std::log1p(-s);
  return LogValue::from_log(power * log_det);
}

HermitianEigen eigh(const ComplexMatrix& x) {
  if (!is_hermitian(x, 1e-10 * std::max(1.0, max_abs(x))))
    throw std::invalid_argument("eigh: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(x);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Svd svd(const ComplexMatrix& x) {
  Eigen::JacobiSVD<ComplexMatrix> solver(
      x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // reverse to ascending order, permuting the factors consistently
  Svd out;
  out.singular_values = solver.singularValues().reverse();
  out.u = solver.matrixU().rowwise().reverse();
  out.v = solver.matrixV().rowwise().reverse();
  return out;
}

Eigen::VectorXd singular_values(const ComplexMatrix& x) {
  Eigen::JacobiSVD<ComplexMatrix> solver(x);
  return solver.singularValues().reverse();
}

Polar polar(const ComplexMatrix& x) {
  if (x.rows() != x.cols())
    throw std::invalid_argument("polar: square matrix required");
  Eigen::JacobiSVD<ComplexMatrix> solver(
      x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Polar out;
  out.unitary = solver.matrixU() * solver.matrixV().adjoint();
  out.positive = solver.matrixV() *
                 solver.singularValues().asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                 solver.matrixV().adjoint();
  return out;
}

}  // namespace haarint
