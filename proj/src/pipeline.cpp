#include "pane/pipeline.hpp"

#include <chrono>
#include <numeric>
#include <random>
#include <string>

namespace pane {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point& mark) {
  const auto now = Clock::now();
  const double s = std::chrono::duration<double>(now - mark).count();
  mark = now;
  return s;
}

// Equal blocks of ceil(count / blocks) ids; optionally a seeded shuffle of the
// id sequence first, so blocks are random but the run stays reproducible.
Partition make_blocks(std::uint32_t count, int blocks, bool shuffle,
                      std::uint64_t seed) {
  if (!shuffle) return contiguous_partition(count, static_cast<std::uint32_t>(blocks));
  std::vector<std::uint32_t> ids(count);
  std::iota(ids.begin(), ids.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  Partition part(static_cast<std::size_t>(blocks));
  const std::uint32_t per =
      count == 0 ? 0 : (count + static_cast<std::uint32_t>(blocks) - 1) /
                           static_cast<std::uint32_t>(blocks);
  for (std::uint32_t i = 0; i < count; ++i) part[per == 0 ? 0 : i / per].push_back(ids[i]);
  return part;
}

}  // namespace

EmbeddingSet pane(const AttributedGraph& g, const PaneConfig& cfg,
                  PhaseTimings* timings) {
  if (g.n == 0 || g.d == 0) throw ConfigError("graph has no nodes or no attributes");
  if (cfg.k < 2 || cfg.k % 2 != 0)
    throw ConfigError("k must be a positive even number, got " + std::to_string(cfg.k));
  if (cfg.n_b < 1) throw ConfigError("n_b must be >= 1");

  const WalkParams params = make_walk_params(cfg.alpha, cfg.epsilon);
  const int power = cfg.svd_power_iters > 0 ? cfg.svd_power_iters : params.t;
  const int sweeps = cfg.ccd_sweeps >= 0 ? cfg.ccd_sweeps : params.t;

  Partition node_part, attr_part;
  if (cfg.n_b > 1) {
    node_part = make_blocks(g.n, cfg.n_b, cfg.shuffle_partition, cfg.seed);
    attr_part = make_blocks(g.d, cfg.n_b, cfg.shuffle_partition, cfg.seed + 1);
  }

  auto mark = Clock::now();
  const RandomWalkMatrix p = random_walk_matrix(g);
  const NormalizedAttributes attrs = normalize_attributes(g);
  const AffinityPair aff =
      cfg.n_b == 1 ? apmi(p, attrs, params)
                   : papmi(p, attrs, params, attr_part, node_part, cfg.n_b);
  if (timings) timings->affinity = seconds_since(mark);

  InitResult init = cfg.n_b == 1
                        ? greedy_init(aff, cfg.k, power, cfg.seed)
                        : sm_greedy_init(aff, node_part, cfg.k, power, cfg.seed);
  if (timings) timings->init = seconds_since(mark);

  CcdState state = make_ccd_state(std::move(init));
  RefineOptions opts;
  opts.sweeps = sweeps;
  opts.early_stop = cfg.early_stop;
  opts.diagnostics = cfg.diagnostics;
  EmbeddingSet emb =
      cfg.n_b == 1
          ? refine(state, aff, opts)
          : refine_parallel(state, aff, opts, node_part, attr_part, cfg.n_b);
  if (timings) timings->ccd = seconds_since(mark);
  return emb;
}

RowMat export_classifier_features(const EmbeddingSet& emb) {
  const Eigen::Index n = emb.x_f.rows();
  const Eigen::Index half = emb.x_f.cols();
  RowMat out(n, 2 * half);
  for (Eigen::Index v = 0; v < n; ++v) {
    out.row(v).head(half) = emb.x_f.row(v);
    out.row(v).tail(half) = emb.x_b.row(v);
    const double nf = emb.x_f.row(v).norm();
    const double nb = emb.x_b.row(v).norm();
    if (nf > 0.0) out.row(v).head(half) /= nf;
    if (nb > 0.0) out.row(v).tail(half) /= nb;
  }
  return out;
}

}  // namespace pane
