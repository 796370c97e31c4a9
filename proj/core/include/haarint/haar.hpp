#pragma once

#include <optional>
#include <utility>

#include "haarint/matrix.hpp"
#include "haarint/rng.hpp"

namespace haarint {

/// Which blocks of the unitary to extract: the leading q x q block, and
/// optionally the next p x p diagonal block on the orthogonal subspace.
/// With p present the dimensions must satisfy 2(p + q) <= N.
struct BlockSpec {
  int q = 1;
  std::optional<int> p;
};

/// Haar-distributed U(N) matrix. Independent complex Gaussian entries are
/// QR-orthonormalized, then the phases are fixed so that the triangular
/// factor has positive real diagonal; without that correction the QR sign
/// convention biases the distribution.
ComplexMatrix sample_unitary(int n, Rng& rng);
ComplexMatrix sample_unitary(int n, RngStream stream, std::uint64_t substream = 0);

/// First k columns of a Haar unitary (uniform on the Stiefel manifold).
/// Exact in distribution and much cheaper than sampling all N columns
/// when only a small block is needed.
ComplexMatrix sample_stiefel(int n, int k, Rng& rng);

/// Leading q x q block A of a Haar U(N); lies in the closed ball.
ComplexMatrix sample_block(int n, int q, Rng& rng);

/// Blocks (A, D) of one Haar unitary on two orthogonal subspaces spanned
/// by the first q and the next p basis vectors.
std::pair<ComplexMatrix, ComplexMatrix> sample_block_pair(int n, int q, int p,
                                                          Rng& rng);

ComplexMatrix block(const ComplexMatrix& u, const BlockSpec& spec);
std::pair<ComplexMatrix, ComplexMatrix> block_pair(const ComplexMatrix& u,
                                                   const BlockSpec& spec);

}  // namespace haarint
