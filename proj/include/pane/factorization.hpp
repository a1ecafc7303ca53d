#pragma once

#include "pane/affinity.hpp"
#include "pane/types.hpp"

#include <utility>

namespace pane {

struct SvdResult {
  ColMat u;     // n x r
  Vec sigma;    // r, non-increasing
  ColMat v;     // d x r
};

// Randomized SVD: Gaussian test matrix of width min(rank+8, min(n,d)),
// q rounds of subspace iteration with QR re-orthonormalization, exact SVD of
// the projected matrix, truncated to `rank`. Deterministic for a fixed seed.
SvdResult rand_svd(const RowMat& m, int rank, int power_iters, std::uint64_t seed);

struct EmbeddingSet {
  ColMat x_f;  // n x k/2
  ColMat x_b;  // n x k/2
  ColMat y;    // d x k/2
  int k() const { return static_cast<int>(2 * x_f.cols()); }
};

// S_f = X_f Y^T - F', S_b = X_b Y^T - B' (one sign convention everywhere;
// with it, the CCD steps below are exact per-coordinate minimizers).
struct ResidualState {
  RowMat s_f;
  RowMat s_b;
};

using InitResult = std::pair<EmbeddingSet, ResidualState>;

// X_f = U*Sigma, Y = V from rand_svd(F', k/2); X_b = B'*Y.
InitResult greedy_init(const AffinityPair& aff, int k, int power_iters,
                       std::uint64_t seed);

// Split-merge init: SVD each F' row block, re-SVD the stacked right factors
// to get a shared Y, then X_f[block_i] = (U_i Sigma_i) * W_i. One worker per
// node block; the merge SVD is single-threaded.
InitResult sm_greedy_init(const AffinityPair& aff, const Partition& node_partition,
                          int k, int power_iters, std::uint64_t seed);

}  // namespace pane
