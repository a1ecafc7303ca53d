#pragma once

#include "pane/graph.hpp"
#include "pane/types.hpp"

namespace pane {

struct WalkParams {
  double alpha = 0.5;
  double epsilon = 0.015;
  int t = 0;
};

// t = ceil(ln(eps)/ln(1-alpha) - 1), clamped to >= 1, so (1-alpha)^(t+1) <= eps.
int derive_iterations(double alpha, double epsilon);
WalkParams make_walk_params(double alpha, double epsilon);

// Log-scaled forward/backward affinity, F' = log2(n*Phat_f + 1), B' = log2(d*Phat_b + 1).
struct AffinityPair {
  RowMat f_prime;  // n x d
  RowMat b_prime;  // n x d
  int t = 0;
  double alpha = 0.0;
  static constexpr int log_base = 2;
};

// Truncated walk distributions before normalization:
//   p_f = alpha * sum_{l=0..t} (1-alpha)^l P^l   R_r
//   p_b = alpha * sum_{l=0..t} (1-alpha)^l P^T^l R_c
// computed by the Horner-style recurrence acc <- (1-alpha) P acc + alpha R_r
// seeded with alpha*R_r. Exposed so the truncation-error bounds are testable.
struct WalkDistributions {
  RowMat p_f;
  RowMat p_b;
};

WalkDistributions truncated_distributions(const RandomWalkMatrix& p,
                                          const NormalizedAttributes& attrs,
                                          const WalkParams& params);

AffinityPair apmi(const RandomWalkMatrix& p, const NormalizedAttributes& attrs,
                  const WalkParams& params);

// Column-block parallel variant. Each worker iterates its attribute block;
// normalization denominators are reduced in fixed index order, so the output
// is identical to apmi for any valid partition.
AffinityPair papmi(const RandomWalkMatrix& p, const NormalizedAttributes& attrs,
                   const WalkParams& params, const Partition& attr_partition,
                   const Partition& node_partition, int workers);

// Brute-force series evaluation of the untruncated distributions, summed until
// the residual mass (1-alpha)^(l+1) < tol. Independent of the paths above.
WalkDistributions exact_distributions(const RandomWalkMatrix& p,
                                      const NormalizedAttributes& attrs,
                                      double alpha, double tol);

// Exact affinities F, B to accuracy tol; guarded to n*d <= 1e6.
AffinityPair exact_affinity_oracle(const RandomWalkMatrix& p,
                                   const NormalizedAttributes& attrs,
                                   double alpha, double tol = 1e-12);

}  // namespace pane
