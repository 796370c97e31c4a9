#pragma once

#include <Eigen/Dense>
#include <vector>

#include "haarint/log_value.hpp"
#include "haarint/matrix.hpp"

namespace haarint {

/// Determinant of the realified 2n x 2n block matrix
/// [[Re X, -Im X], [Im X, Re X]]. Equals |det X|^2 for invertible X.
double det_realified(const ComplexMatrix& x);

/// det(1 - A*A (x) D*D) = prod_{i,j} (1 - a_i^2 d_j^2) over the squared
/// singular values of the two blocks. Both blocks must lie in the open
/// ball; the result is in (0, 1].
double coupling_det(const ComplexMatrix& a, const ComplexMatrix& d);

/// power * log det(1 - A*A) as a LogValue with phase +1, i.e. the log of
/// the ball weight (det(1 - A*A))^power.
LogValue log_det_one_minus_gram(const ComplexMatrix& a, double power);

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascending.
struct HermitianEigen {
  Eigen::VectorXd values;
  ComplexMatrix vectors;  // columns, X = V diag(values) V*
};
HermitianEigen eigh(const ComplexMatrix& x);

/// Singular value decomposition X = U diag(s) V*. Singular values are
/// reported ascending, matching the eigenvalue ordering convention.
struct Svd {
  ComplexMatrix u;
  Eigen::VectorXd singular_values;
  ComplexMatrix v;
};
Svd svd(const ComplexMatrix& x);

Eigen::VectorXd singular_values(const ComplexMatrix& x);

/// Polar decomposition X = U P with U unitary and P positive
/// semi-definite.
struct Polar {
  ComplexMatrix unitary;
  ComplexMatrix positive;
};
Polar polar(const ComplexMatrix& x);

/// Squared singular values, ascending, after checking ball membership.
/// Throws std::domain_error("outside ball domain") otherwise.
std::vector<double> ball_squared_singular_values(const ComplexMatrix& a);

}  // namespace haarint
