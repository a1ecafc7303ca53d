#include "pane/ccd.hpp"

#include "pane/parallel.hpp"

#include <numeric>
#include <ostream>
#include <string>

namespace pane {

namespace {

// Below this a coordinate's least-squares denominator is treated as zero and
// the update skipped; dividing through would blow the iterate up.
constexpr double kTinyDenominator = 1e-300;

void check_dims(const CcdState& state, const AffinityPair& aff) {
  if (state.res.s_f.rows() != aff.f_prime.rows() ||
      state.res.s_f.cols() != aff.f_prime.cols() ||
      state.res.s_b.rows() != aff.b_prime.rows() ||
      state.res.s_b.cols() != aff.b_prime.cols())
    throw ConfigError("ccd state does not match affinity dimensions");
}

// For node v the objective restricted to X_f(v,l) is ||S_f.row(v) - mu y_l||^2
// in the step mu, minimized at mu = S_f.row(v).y_l / ||y_l||^2 (same for X_b).
// Rows of distinct nodes touch disjoint state, so any node order gives the
// same result; within a node, coordinates go in ascending order.
void node_pass(CcdState& state, const std::vector<std::uint32_t>& rows,
               const Vec& y_norms, std::uint64_t& skipped) {
  auto& emb = state.emb;
  auto& res = state.res;
  const Eigen::Index r = emb.y.cols();
  for (std::uint32_t v : rows) {
    for (Eigen::Index l = 0; l < r; ++l) {
      if (y_norms[l] < kTinyDenominator) {
        skipped += 2;
        continue;
      }
      const auto yl = emb.y.col(l);
      const double mu_f = res.s_f.row(v).dot(yl) / y_norms[l];
      emb.x_f(v, l) -= mu_f;
      res.s_f.row(v) -= mu_f * yl.transpose();
      const double mu_b = res.s_b.row(v).dot(yl) / y_norms[l];
      emb.x_b(v, l) -= mu_b;
      res.s_b.row(v) -= mu_b * yl.transpose();
    }
  }
}

// For attribute c the step in Y(c,l) shows up in both residual columns:
// mu = (X_f(:,l).S_f(:,c) + X_b(:,l).S_b(:,c)) / (||X_f(:,l)||^2 + ||X_b(:,l)||^2).
void attr_pass(CcdState& state, const std::vector<std::uint32_t>& cols,
               const Vec& x_norms, std::uint64_t& skipped) {
  auto& emb = state.emb;
  auto& res = state.res;
  const Eigen::Index r = emb.y.cols();
  for (std::uint32_t c : cols) {
    for (Eigen::Index l = 0; l < r; ++l) {
      if (x_norms[l] < kTinyDenominator) {
        ++skipped;
        continue;
      }
      const double num = emb.x_f.col(l).dot(res.s_f.col(c)) +
                         emb.x_b.col(l).dot(res.s_b.col(c));
      const double mu = num / x_norms[l];
      emb.y(c, l) -= mu;
      res.s_f.col(c) -= mu * emb.x_f.col(l);
      res.s_b.col(c) -= mu * emb.x_b.col(l);
    }
  }
}

Vec node_denominators(const EmbeddingSet& emb) {
  return emb.y.colwise().squaredNorm().transpose();
}

Vec attr_denominators(const EmbeddingSet& emb) {
  return (emb.x_f.colwise().squaredNorm() + emb.x_b.colwise().squaredNorm())
      .transpose();
}

}  // namespace

CcdState make_ccd_state(InitResult init) {
  CcdState state;
  state.emb = std::move(init.first);
  state.res = std::move(init.second);
  return state;
}

double objective(const AffinityPair& aff, const EmbeddingSet& emb) {
  const RowMat yt = emb.y.transpose();
  return (emb.x_f * yt - aff.f_prime).squaredNorm() +
         (emb.x_b * yt - aff.b_prime).squaredNorm();
}

double objective_from_residuals(const CcdState& state) {
  return state.res.s_f.squaredNorm() + state.res.s_b.squaredNorm();
}

void ccd_sweep_nodes(CcdState& state, const AffinityPair& aff) {
  check_dims(state, aff);
  const Vec y_norms = node_denominators(state.emb);
  std::vector<std::uint32_t> all(static_cast<std::size_t>(state.res.s_f.rows()));
  std::iota(all.begin(), all.end(), 0);
  node_pass(state, all, y_norms, state.skipped_coords);
}

void ccd_sweep_attrs(CcdState& state, const AffinityPair& aff) {
  check_dims(state, aff);
  const Vec x_norms = attr_denominators(state.emb);
  std::vector<std::uint32_t> all(static_cast<std::size_t>(state.res.s_f.cols()));
  std::iota(all.begin(), all.end(), 0);
  attr_pass(state, all, x_norms, state.skipped_coords);
}

EmbeddingSet refine_parallel(CcdState& state, const AffinityPair& aff,
                             const RefineOptions& opts,
                             const Partition& node_partition,
                             const Partition& attr_partition, int workers) {
  check_dims(state, aff);
  const auto n = static_cast<std::uint32_t>(state.res.s_f.rows());
  const auto d = static_cast<std::uint32_t>(state.res.s_f.cols());
  validate_partition(node_partition, n, "node");
  validate_partition(attr_partition, d, "attribute");
  if (workers < 1) throw ConfigError("refine needs workers >= 1");
  if (opts.sweeps < 0) throw ConfigError("refine needs sweeps >= 0");

  double prev = opts.early_stop ? objective_from_residuals(state) : 0.0;
  for (int s = 0; s < opts.sweeps; ++s) {
    {
      const Vec y_norms = node_denominators(state.emb);
      std::vector<std::uint64_t> skipped(node_partition.size(), 0);
      run_blocks(node_partition.size(), workers, [&](std::size_t b) {
        node_pass(state, node_partition[b], y_norms, skipped[b]);
      });
      for (std::uint64_t c : skipped) state.skipped_coords += c;
    }
    {
      const Vec x_norms = attr_denominators(state.emb);
      std::vector<std::uint64_t> skipped(attr_partition.size(), 0);
      run_blocks(attr_partition.size(), workers, [&](std::size_t b) {
        attr_pass(state, attr_partition[b], x_norms, skipped[b]);
      });
      for (std::uint64_t c : skipped) state.skipped_coords += c;
    }
    ++state.sweep;

    double cur = 0.0;
    const bool need_objective = opts.early_stop || opts.diagnostics;
    if (need_objective) cur = objective_from_residuals(state);
    if (opts.diagnostics)
      (*opts.diagnostics) << "sweep=" << state.sweep << " objective=" << cur
                          << " skipped_coords=" << state.skipped_coords << "\n";
    if (opts.early_stop) {
      if (prev > 0.0 && (prev - cur) / prev < opts.early_stop_tol) break;
      prev = cur;
    }
  }
  return state.emb;
}

EmbeddingSet refine(CcdState& state, const AffinityPair& aff,
                    const RefineOptions& opts) {
  const auto n = static_cast<std::uint32_t>(state.res.s_f.rows());
  const auto d = static_cast<std::uint32_t>(state.res.s_f.cols());
  return refine_parallel(state, aff, opts, contiguous_partition(n, 1),
                         contiguous_partition(d, 1), 1);
}

}  // namespace pane
