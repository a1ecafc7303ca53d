#include "pane/affinity.hpp"

#include "pane/parallel.hpp"

#include <cmath>
#include <string>

namespace pane {

int derive_iterations(double alpha, double epsilon) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("alpha must lie in (0,1), got " + std::to_string(alpha));
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("epsilon must lie in (0,1), got " + std::to_string(epsilon));
  double t = std::ceil(std::log(epsilon) / std::log(1.0 - alpha) - 1.0);
  return t < 1.0 ? 1 : static_cast<int>(t);
}

WalkParams make_walk_params(double alpha, double epsilon) {
  return {alpha, epsilon, derive_iterations(alpha, epsilon)};
}

namespace {

void check_shapes(const RandomWalkMatrix& p, const NormalizedAttributes& attrs) {
  if (p.n != attrs.n)
    throw ConfigError("walk matrix has " + std::to_string(p.n) +
                      " nodes, attributes have " + std::to_string(attrs.n));
}

// Seed entries of one attribute block, gathered as a local CSC so each
// iteration can re-add alpha * R_r (resp. R_c) in O(nnz(block)).
struct SeedBlock {
  std::vector<std::uint64_t> offsets;  // per local column
  std::vector<NodeId> nodes;
  std::vector<double> values;
};

SeedBlock gather_seeds(const NormalizedAttributes& attrs,
                       const std::vector<std::uint32_t>& cols, bool forward) {
  const auto& vals = forward ? attrs.rr_values : attrs.rc_values;
  SeedBlock s;
  s.offsets.reserve(cols.size() + 1);
  s.offsets.push_back(0);
  for (std::uint32_t c : cols) {
    for (std::uint64_t i = attrs.col_offsets[c]; i < attrs.col_offsets[c + 1]; ++i) {
      s.nodes.push_back(attrs.col_nodes[i]);
      s.values.push_back(vals[i]);
    }
    s.offsets.push_back(s.nodes.size());
  }
  return s;
}

template <typename Block>
void add_scaled_seeds(Block&& acc, const SeedBlock& seed, double alpha) {
  for (std::size_t lc = 0; lc + 1 < seed.offsets.size(); ++lc)
    for (std::uint64_t i = seed.offsets[lc]; i < seed.offsets[lc + 1]; ++i)
      acc(seed.nodes[i], static_cast<Eigen::Index>(lc)) += alpha * seed.values[i];
}

// scratch <- P * acc (transpose=false) or P^T * acc (transpose=true).
template <typename Block>
void spmm(const RandomWalkMatrix& p, bool transpose, const Block& acc,
          RowMat& scratch) {
  scratch.setZero();
  if (!transpose) {
    for (NodeId i = 0; i < p.n; ++i) {
      auto out = scratch.row(i);
      for (std::uint64_t e = p.offsets[i]; e < p.offsets[i + 1]; ++e)
        out += p.values[e] * acc.row(p.targets[e]);
    }
  } else {
    for (NodeId i = 0; i < p.n; ++i) {
      auto in = acc.row(i);
      for (std::uint64_t e = p.offsets[i]; e < p.offsets[i + 1]; ++e)
        scratch.row(p.targets[e]) += p.values[e] * in;
    }
  }
}

// acc starts at alpha * seed and receives t rounds of
// acc <- (1-alpha) * (P acc) + alpha * seed, i.e. the truncated series
// alpha * sum_{l=0..t} (1-alpha)^l P^l seed. (Seeding with the bare seed
// instead would leave an un-damped (1-alpha)^t P^t seed term and break the
// one-sided truncation bound: the truncated mass must never exceed the
// exact walk probability.)
template <typename Block>
void iterate_block(const RandomWalkMatrix& p, bool transpose,
                   const SeedBlock& seed, int t, double alpha, Block&& acc,
                   RowMat& scratch) {
  acc.setZero();
  add_scaled_seeds(acc, seed, alpha);
  for (int l = 0; l < t; ++l) {
    spmm(p, transpose, acc, scratch);
    acc = (1.0 - alpha) * scratch;
    add_scaled_seeds(acc, seed, alpha);
  }
}

bool is_contiguous(const std::vector<std::uint32_t>& ids) {
  for (std::size_t i = 1; i < ids.size(); ++i)
    if (ids[i] != ids[i - 1] + 1) return false;
  return true;
}

struct AffinityWork {
  RowMat f;  // P_f^(t), transformed in place into F'
  RowMat b;
};

// Shared by apmi and papmi so the sequential path is the blocks=1 case and the
// parallel output is bit-identical to it: every per-column (resp. per-row)
// reduction below runs in the same fixed index order regardless of scheduling.
AffinityPair affinity_impl(const RandomWalkMatrix& p,
                           const NormalizedAttributes& attrs,
                           const WalkParams& params,
                           const Partition& attr_partition,
                           const Partition& node_partition, int workers) {
  check_shapes(p, attrs);
  if (params.t < 1) throw ConfigError("walk iteration count must be >= 1");
  const NodeId n = attrs.n;
  const AttrId d = attrs.d;

  AffinityWork w;
  w.f.resize(n, d);
  w.b.resize(n, d);

  // Iteration phase: each worker owns one attribute column block.
  run_blocks(attr_partition.size(), workers, [&](std::size_t bi) {
    const auto& cols = attr_partition[bi];
    if (cols.empty()) return;
    const auto width = static_cast<Eigen::Index>(cols.size());
    RowMat scratch(n, width);
    SeedBlock seed_f = gather_seeds(attrs, cols, true);
    SeedBlock seed_b = gather_seeds(attrs, cols, false);
    if (is_contiguous(cols)) {
      auto fb = w.f.middleCols(cols.front(), width);
      auto bb = w.b.middleCols(cols.front(), width);
      iterate_block(p, false, seed_f, params.t, params.alpha, fb, scratch);
      iterate_block(p, true, seed_b, params.t, params.alpha, bb, scratch);
    } else {
      RowMat acc(n, width);
      iterate_block(p, false, seed_f, params.t, params.alpha, acc, scratch);
      for (Eigen::Index lc = 0; lc < width; ++lc) w.f.col(cols[lc]) = acc.col(lc);
      iterate_block(p, true, seed_b, params.t, params.alpha, acc, scratch);
      for (Eigen::Index lc = 0; lc < width; ++lc) w.b.col(cols[lc]) = acc.col(lc);
    }
  });

  // Reductions: column sums of P_f^(t) (owned per attribute block), row sums
  // of P_b^(t) (owned per node block), inner loops in ascending index order.
  Vec col_sum = Vec::Zero(d);
  run_blocks(attr_partition.size(), workers, [&](std::size_t bi) {
    for (std::uint32_t c : attr_partition[bi]) {
      double s = 0.0;
      for (NodeId i = 0; i < n; ++i) s += w.f(i, c);
      col_sum[c] = s;
    }
  });
  Vec row_sum = Vec::Zero(n);
  run_blocks(node_partition.size(), workers, [&](std::size_t bi) {
    for (std::uint32_t i : node_partition[bi]) {
      double s = 0.0;
      for (AttrId c = 0; c < d; ++c) s += w.b(i, c);
      row_sum[i] = s;
    }
  });

  // Normalize and log-transform: F' by columns, B' by rows; zero columns/rows
  // stay zero (log2(0 + 1)).
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  run_blocks(attr_partition.size(), workers, [&](std::size_t bi) {
    for (std::uint32_t c : attr_partition[bi]) {
      if (col_sum[c] <= 0.0) continue;
      const double inv = col_sum[c];
      for (NodeId i = 0; i < n; ++i)
        w.f(i, c) = std::log2(nd * (w.f(i, c) / inv) + 1.0);
    }
  });
  run_blocks(node_partition.size(), workers, [&](std::size_t bi) {
    for (std::uint32_t i : node_partition[bi]) {
      if (row_sum[i] <= 0.0) continue;
      const double inv = row_sum[i];
      for (AttrId c = 0; c < d; ++c)
        w.b(i, c) = std::log2(dd * (w.b(i, c) / inv) + 1.0);
    }
  });

  AffinityPair out;
  out.f_prime = std::move(w.f);
  out.b_prime = std::move(w.b);
  out.t = params.t;
  out.alpha = params.alpha;
  return out;
}

}  // namespace

WalkDistributions truncated_distributions(const RandomWalkMatrix& p,
                                          const NormalizedAttributes& attrs,
                                          const WalkParams& params) {
  check_shapes(p, attrs);
  if (params.t < 1) throw ConfigError("walk iteration count must be >= 1");
  WalkDistributions wd;
  wd.p_f.resize(attrs.n, attrs.d);
  wd.p_b.resize(attrs.n, attrs.d);
  std::vector<std::uint32_t> all(attrs.d);
  for (AttrId c = 0; c < attrs.d; ++c) all[c] = c;
  RowMat scratch(attrs.n, attrs.d);
  SeedBlock seed_f = gather_seeds(attrs, all, true);
  SeedBlock seed_b = gather_seeds(attrs, all, false);
  iterate_block(p, false, seed_f, params.t, params.alpha, wd.p_f, scratch);
  iterate_block(p, true, seed_b, params.t, params.alpha, wd.p_b, scratch);
  return wd;
}

AffinityPair apmi(const RandomWalkMatrix& p, const NormalizedAttributes& attrs,
                  const WalkParams& params) {
  return affinity_impl(p, attrs, params, contiguous_partition(attrs.d, 1),
                       contiguous_partition(attrs.n, 1), 1);
}

AffinityPair papmi(const RandomWalkMatrix& p, const NormalizedAttributes& attrs,
                   const WalkParams& params, const Partition& attr_partition,
                   const Partition& node_partition, int workers) {
  validate_partition(attr_partition, attrs.d, "attribute");
  validate_partition(node_partition, attrs.n, "node");
  if (workers < 1) throw ConfigError("worker count must be >= 1");
  return affinity_impl(p, attrs, params, attr_partition, node_partition, workers);
}

WalkDistributions exact_distributions(const RandomWalkMatrix& p,
                                      const NormalizedAttributes& attrs,
                                      double alpha, double tol) {
  check_shapes(p, attrs);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha out of range");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  const NodeId n = attrs.n;
  const AttrId d = attrs.d;
  if (static_cast<std::uint64_t>(n) * d > 1000000)
    throw ConfigError("exact oracle limited to n*d <= 1e6");

  // Dense seeds.
  RowMat rr = RowMat::Zero(n, d), rc = RowMat::Zero(n, d);
  for (AttrId c = 0; c < d; ++c)
    for (std::uint64_t i = attrs.col_offsets[c]; i < attrs.col_offsets[c + 1]; ++i) {
      rr(attrs.col_nodes[i], c) = attrs.rr_values[i];
      rc(attrs.col_nodes[i], c) = attrs.rc_values[i];
    }

  // Direct series: acc = alpha * sum_l (1-alpha)^l P^l seed, summed until the
  // remaining mass (1-alpha)^(l+1) drops below tol. Deliberately written as a
  // term-by-term accumulation, not the Horner recurrence used by apmi.
  auto series = [&](const RowMat& seed, bool transpose) {
    RowMat term = seed;
    RowMat acc = alpha * term;
    RowMat next(n, d);
    double damp = 1.0;
    int l = 0;
    while (damp * (1.0 - alpha) >= tol) {
      ++l;
      damp *= (1.0 - alpha);
      next.setZero();
      if (!transpose) {
        for (NodeId i = 0; i < n; ++i)
          for (std::uint64_t e = p.offsets[i]; e < p.offsets[i + 1]; ++e)
            next.row(i) += p.values[e] * term.row(p.targets[e]);
      } else {
        for (NodeId i = 0; i < n; ++i)
          for (std::uint64_t e = p.offsets[i]; e < p.offsets[i + 1]; ++e)
            next.row(p.targets[e]) += p.values[e] * term.row(i);
      }
      term.swap(next);
      acc += (alpha * damp) * term;
    }
    return acc;
  };

  WalkDistributions wd;
  wd.p_f = series(rr, false);
  wd.p_b = series(rc, true);
  return wd;
}

AffinityPair exact_affinity_oracle(const RandomWalkMatrix& p,
                                   const NormalizedAttributes& attrs,
                                   double alpha, double tol) {
  WalkDistributions wd = exact_distributions(p, attrs, alpha, tol);
  const NodeId n = attrs.n;
  const AttrId d = attrs.d;
  AffinityPair out;
  out.f_prime.resize(n, d);
  out.b_prime.resize(n, d);
  out.t = -1;  // untruncated
  out.alpha = alpha;
  for (AttrId c = 0; c < d; ++c) {
    double s = 0.0;
    for (NodeId i = 0; i < n; ++i) s += wd.p_f(i, c);
    for (NodeId i = 0; i < n; ++i)
      out.f_prime(i, c) =
          s > 0.0 ? std::log2(static_cast<double>(n) * (wd.p_f(i, c) / s) + 1.0)
                  : 0.0;
  }
  for (NodeId i = 0; i < n; ++i) {
    double s = 0.0;
    for (AttrId c = 0; c < d; ++c) s += wd.p_b(i, c);
    for (AttrId c = 0; c < d; ++c)
      out.b_prime(i, c) =
          s > 0.0 ? std::log2(static_cast<double>(d) * (wd.p_b(i, c) / s) + 1.0)
                  : 0.0;
  }
  return out;
}

}  // namespace pane
