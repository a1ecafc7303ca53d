#include "pane/synth.hpp"

#include <random>
#include <string>
#include <unordered_set>

namespace pane {

namespace {

struct Blocks {
  std::uint32_t per = 0;

  std::uint32_t of(std::uint32_t id) const { return id / per; }
  std::uint32_t lo(std::uint32_t b) const { return b * per; }
  std::uint32_t hi(std::uint32_t b, std::uint32_t count) const {
    return std::min(count, (b + 1) * per);
  }
};

Blocks blocks_over(std::uint32_t count, std::uint32_t communities) {
  return {(count + communities - 1) / communities};
}

// Uniform draw from [0, count) \ [lo, hi).
std::uint32_t draw_outside(std::mt19937_64& rng, std::uint32_t count,
                           std::uint32_t lo, std::uint32_t hi) {
  std::uniform_int_distribution<std::uint32_t> pick(0, count - (hi - lo) - 1);
  const std::uint32_t u = pick(rng);
  return u < lo ? u : u + (hi - lo);
}

void check_config(const SynthConfig& cfg) {
  if (cfg.communities < 1) throw ConfigError("synth needs communities >= 1");
  if (cfg.n < 2 || cfg.n < cfg.communities)
    throw ConfigError("synth needs n >= max(2, communities)");
  if (cfg.d < cfg.communities) throw ConfigError("synth needs d >= communities");
  if (cfg.avg_degree < 1.0) throw ConfigError("synth needs avg_degree >= 1");
  if (!(cfg.edge_homophily >= 0.0 && cfg.edge_homophily <= 1.0) ||
      !(cfg.attr_homophily >= 0.0 && cfg.attr_homophily <= 1.0))
    throw ConfigError("homophily parameters must lie in [0,1]");
  if (cfg.attrs_per_node < 1 || cfg.attrs_per_node > cfg.d)
    throw ConfigError("synth needs 1 <= attrs_per_node <= d");
}

}  // namespace

std::uint32_t node_community(NodeId v, NodeId n, std::uint32_t communities) {
  return blocks_over(n, communities).of(v);
}

std::uint32_t attr_community(AttrId r, AttrId d, std::uint32_t communities) {
  return blocks_over(d, communities).of(r);
}

SynthGraph synth_graph(const SynthConfig& cfg) {
  check_config(cfg);
  // Separate streams so the topology is a function of (n, seed, avg_degree,
  // edge_homophily) alone: changing attribute knobs leaves the edge set intact.
  std::mt19937_64 rng_e(cfg.seed);
  std::mt19937_64 rng_a(cfg.seed ^ 0xa5a5a5a55a5a5a5aULL);
  std::bernoulli_distribution edge_home(cfg.edge_homophily);
  std::bernoulli_distribution attr_home(cfg.attr_homophily);
  const Blocks nodes = blocks_over(cfg.n, cfg.communities);
  const Blocks attrs = blocks_over(cfg.d, cfg.communities);
  const auto stubs = static_cast<std::uint32_t>(std::llround(cfg.avg_degree));

  SynthGraph g;
  g.n = cfg.n;
  g.d = cfg.d;
  g.edges.reserve(static_cast<std::size_t>(cfg.n) * stubs);
  g.attrs.reserve(static_cast<std::size_t>(cfg.n) * cfg.attrs_per_node);

  for (NodeId v = 0; v < cfg.n; ++v) {
    const std::uint32_t c = nodes.of(v);
    const std::uint32_t lo = nodes.lo(c), hi = nodes.hi(c, cfg.n);
    for (std::uint32_t s = 0; s < stubs; ++s) {
      NodeId target = v;
      // A same-community stub needs a peer; a cross-community one needs any
      // node outside the block. Fall back to the whole graph when the choice
      // is structurally empty (single community, or a singleton block).
      const bool home = edge_home(rng_e);
      if (home && hi - lo > 1) {
        std::uniform_int_distribution<std::uint32_t> pick(lo, hi - 1);
        do target = pick(rng_e); while (target == v);
      } else if (!home && hi - lo < cfg.n) {
        target = draw_outside(rng_e, cfg.n, lo, hi);
      } else {
        std::uniform_int_distribution<std::uint32_t> pick(0, cfg.n - 1);
        do target = pick(rng_e); while (target == v);
      }
      g.edges.emplace_back(v, target);
    }
  }

  for (NodeId v = 0; v < cfg.n; ++v) {
    const std::uint32_t c = nodes.of(v);
    const std::uint32_t alo = attrs.lo(c), ahi = attrs.hi(c, cfg.d);
    std::unordered_set<AttrId> chosen;
    chosen.reserve(cfg.attrs_per_node);
    std::uint32_t attempts = 0;
    while (chosen.size() < cfg.attrs_per_node) {
      AttrId r;
      const bool home = attr_home(rng_a);
      if (home || ahi - alo == cfg.d) {
        std::uniform_int_distribution<std::uint32_t> pick(alo, ahi - 1);
        r = pick(rng_a);
      } else {
        r = draw_outside(rng_a, cfg.d, alo, ahi);
      }
      if (chosen.insert(r).second) g.attrs.push_back({v, r, 1.0});
      if (++attempts > 100u * cfg.attrs_per_node + 100u)
        throw ConfigError("synth cannot place " + std::to_string(cfg.attrs_per_node) +
                          " distinct attributes per node");
    }
  }
  return g;
}

AttributedGraph synth_attributed_graph(const SynthConfig& cfg) {
  SynthGraph g = synth_graph(cfg);
  return make_graph(g.n, g.d, std::move(g.edges), std::move(g.attrs));
}

}  // namespace pane
