#include "haarint/haar.hpp"

#include <Eigen/QR>
#include <stdexcept>

namespace haarint {

namespace {

void check_dims(int n, int k) {
  if (n < 1) throw std::invalid_argument("haar sampler: empty dimension");
  if (k < 1 || k > n) throw std::invalid_argument("haar sampler: bad column count");
}

ComplexMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

// Orthonormalizes the columns of g and applies the phase correction that
// makes the implicit R factor have positive real diagonal.
ComplexMatrix orthonormalized(const ComplexMatrix& g) {
  const Eigen::Index n = g.rows(), k = g.cols();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    std::complex<double> r = qr.matrixQR()(j, j);
    double m = std::abs(r);
    if (m > 0) q.col(j) *= r / m;
  }
  return q;
}

}  // namespace

ComplexMatrix sample_unitary(int n, Rng& rng) {
  check_dims(n, n);
  return orthonormalized(gaussian_matrix(n, n, rng));
}

ComplexMatrix sample_unitary(int n, RngStream stream, std::uint64_t substream) {
  Rng rng(stream, substream);
  return sample_unitary(n, rng);
}

ComplexMatrix sample_stiefel(int n, int k, Rng& rng) {
  check_dims(n, k);
  return orthonormalized(gaussian_matrix(n, k, rng));
}

ComplexMatrix sample_block(int n, int q, Rng& rng) {
  return sample_stiefel(n, q, rng).topRows(q);
}

std::pair<ComplexMatrix, ComplexMatrix> sample_block_pair(int n, int q, int p,
                                                          Rng& rng) {
  if (2 * (p + q) > n)
    throw std::invalid_argument("block pair requires 2(p+q) <= N");
  ComplexMatrix cols = sample_stiefel(n, q + p, rng);
  return {cols.topLeftCorner(q, q), cols.block(q, q, p, p)};
}

ComplexMatrix block(const ComplexMatrix& u, const BlockSpec& spec) {
  if (spec.q < 1 || spec.q > u.rows() || u.rows() != u.cols())
    throw std::invalid_argument("block: dimension mismatch");
  return u.topLeftCorner(spec.q, spec.q);
}

std::pair<ComplexMatrix, ComplexMatrix> block_pair(const ComplexMatrix& u,
                                                   const BlockSpec& spec) {
  if (!spec.p) throw std::invalid_argument("block_pair: second dimension missing");
  const int q = spec.q, p = *spec.p;
  if (q < 1 || p < 1 || 2 * (p + q) > u.rows() || u.rows() != u.cols())
    throw std::invalid_argument("block_pair: dimension mismatch");
  return {u.topLeftCorner(q, q), u.block(q, q, p, p)};
}

}  // namespace haarint
