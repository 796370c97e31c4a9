#include "haarint/matrix.hpp"

#include <Eigen/SVD>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace haarint {

double max_abs(const ComplexMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double unitarity_residual(const ComplexMatrix& u) {
  ComplexMatrix gram = u.adjoint() * u;
  gram.diagonal().array() -= 1.0;
  return max_abs(gram);
}

bool is_unitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  return unitarity_residual(u) <= 1e-12 * static_cast<double>(u.rows());
}

bool in_ball(const ComplexMatrix& a) {
  return spectral_norm(a) < 1.0 - kBallTolerance;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

ComplexMatrix read_matrix(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("matrix file: bad header, expected 'rows cols'");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      double re = 0, im = 0;
      if (!(in >> re >> im))
        throw std::runtime_error("matrix file: truncated entry list");
      m(i, j) = {re, im};
    }
  return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j).real() << ' ' << m(i, j).imag();
    }
    out << '\n';
  }
}

}  // namespace haarint
