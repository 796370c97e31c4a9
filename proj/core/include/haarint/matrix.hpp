#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>

namespace haarint {

using ComplexMatrix = Eigen::MatrixXcd;

/// Tolerance below which the largest singular value must stay for a
/// matrix to count as a member of the open ball A*A < 1. Boundary points
/// are rejected because the log weight diverges there.
inline constexpr double kBallTolerance = 1e-14;

double max_abs(const ComplexMatrix& m);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

/// max-norm of U*U - 1; a unitary must satisfy residual <= 1e-12 * N.
double unitarity_residual(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u);

/// Member of the open ball, largest singular value < 1 - kBallTolerance.
bool in_ball(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

/// Plain text matrix format: first line "rows cols", then row-major
/// "re im" pairs separated by whitespace.
ComplexMatrix read_matrix(std::istream& in);
ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const ComplexMatrix& m);

}  // namespace haarint
