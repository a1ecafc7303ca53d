#include "pane/factorization.hpp"

#include "pane/parallel.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <random>
#include <string>

namespace pane {

namespace {

ColMat gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ColMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

ColMat thin_q(const ColMat& m) {
  Eigen::HouseholderQR<ColMat> qr(m);
  return qr.householderQ() * ColMat::Identity(m.rows(), m.cols());
}

}  // namespace

SvdResult rand_svd(const RowMat& m, int rank, int power_iters, std::uint64_t seed) {
  const Eigen::Index n = m.rows(), d = m.cols();
  if (rank < 1 || rank > std::min(n, d))
    throw ConfigError("rand_svd rank " + std::to_string(rank) +
                      " out of range for " + std::to_string(n) + "x" +
                      std::to_string(d));
  if (power_iters < 1) throw ConfigError("rand_svd needs power_iters >= 1");

  constexpr int kOversample = 8;
  const Eigen::Index width = std::min<Eigen::Index>(rank + kOversample, std::min(n, d));

  // Range finder with subspace iteration: Q spans an approximate dominant
  // column space of m after q rounds of (m^T Q, m Z) with re-orthonormalization.
  ColMat q = thin_q(m * gaussian(d, width, seed));
  for (int it = 0; it < power_iters; ++it) {
    ColMat z = thin_q(m.transpose() * q);
    q = thin_q(m * z);
  }

  ColMat projected = q.transpose() * m;  // width x d
  Eigen::JacobiSVD<ColMat> svd(projected, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdResult out;
  out.u = q * svd.matrixU().leftCols(rank);
  out.sigma = svd.singularValues().head(rank);
  out.v = svd.matrixV().leftCols(rank);
  return out;
}

namespace {

void check_k(int k, Eigen::Index n, Eigen::Index d) {
  if (k < 2 || k % 2 != 0)
    throw ConfigError("k must be a positive even number, got " + std::to_string(k));
  if (k / 2 > std::min(n, d))
    throw ConfigError("k/2 = " + std::to_string(k / 2) + " exceeds min(n,d) = " +
                      std::to_string(std::min(n, d)));
}

}  // namespace

InitResult greedy_init(const AffinityPair& aff, int k, int power_iters,
                       std::uint64_t seed) {
  check_k(k, aff.f_prime.rows(), aff.f_prime.cols());
  const int r = k / 2;
  SvdResult svd = rand_svd(aff.f_prime, r, power_iters, seed);

  EmbeddingSet emb;
  emb.x_f = svd.u * svd.sigma.asDiagonal();
  emb.y = svd.v;
  emb.x_b = aff.b_prime * emb.y;

  ResidualState res;
  res.s_f = emb.x_f * emb.y.transpose() - aff.f_prime;
  res.s_b = emb.x_b * emb.y.transpose() - aff.b_prime;
  return {std::move(emb), std::move(res)};
}

InitResult sm_greedy_init(const AffinityPair& aff, const Partition& node_partition,
                          int k, int power_iters, std::uint64_t seed) {
  const Eigen::Index n = aff.f_prime.rows(), d = aff.f_prime.cols();
  check_k(k, n, d);
  validate_partition(node_partition, static_cast<std::uint32_t>(n), "node");
  const int r = k / 2;
  const std::size_t nb = node_partition.size();
  for (std::size_t bi = 0; bi < nb; ++bi)
    if (node_partition[bi].size() < static_cast<std::size_t>(r))
      throw ConfigError("node block " + std::to_string(bi) + " has " +
                        std::to_string(node_partition[bi].size()) +
                        " rows, needs >= k/2 = " + std::to_string(r));

  // Per block: F'[V_i] ~ U_i V_i^T with U_i already scaled by its singular
  // values. The stacked V_i^T rows get one more SVD, whose right factor is the
  // shared attribute embedding Y and whose left part W realigns each block.
  std::vector<ColMat> u_blocks(nb);
  ColMat stacked(static_cast<Eigen::Index>(nb) * r, d);
  run_blocks(nb, static_cast<int>(nb), [&](std::size_t bi) {
    const auto& rows = node_partition[bi];
    RowMat block(rows.size(), d);
    for (std::size_t i = 0; i < rows.size(); ++i)
      block.row(static_cast<Eigen::Index>(i)) = aff.f_prime.row(rows[i]);
    SvdResult svd = rand_svd(block, r, power_iters, seed + bi + 1);
    u_blocks[bi] = svd.u * svd.sigma.asDiagonal();
    stacked.middleRows(static_cast<Eigen::Index>(bi) * r, r) = svd.v.transpose();
  });

  SvdResult merge = rand_svd(RowMat(stacked), r, power_iters, seed);
  ColMat w = merge.u * merge.sigma.asDiagonal();  // (nb*r) x r

  EmbeddingSet emb;
  emb.x_f.resize(n, r);
  emb.x_b.resize(n, r);
  emb.y = merge.v;
  ResidualState res;
  res.s_f.resize(n, d);
  res.s_b.resize(n, d);

  run_blocks(nb, static_cast<int>(nb), [&](std::size_t bi) {
    const auto& rows = node_partition[bi];
    ColMat xf = u_blocks[bi] * w.middleRows(static_cast<Eigen::Index>(bi) * r, r);
    RowMat bb(rows.size(), d);
    for (std::size_t i = 0; i < rows.size(); ++i)
      bb.row(static_cast<Eigen::Index>(i)) = aff.b_prime.row(rows[i]);
    ColMat xb = bb * emb.y;
    RowMat sf = xf * emb.y.transpose();
    RowMat sb = xb * emb.y.transpose() - bb;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto gi = static_cast<Eigen::Index>(rows[i]);
      const auto li = static_cast<Eigen::Index>(i);
      emb.x_f.row(gi) = xf.row(li);
      emb.x_b.row(gi) = xb.row(li);
      res.s_f.row(gi) = sf.row(li) - aff.f_prime.row(gi);
      res.s_b.row(gi) = sb.row(li);
    }
  });
  return {std::move(emb), std::move(res)};
}

}  // namespace pane
