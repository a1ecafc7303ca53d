#include "pane/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <unordered_set>

namespace pane {

namespace {

void check_ratio(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw ConfigError("split ratio must lie in (0,1), got " + std::to_string(ratio));
}

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

void check_finite(const std::vector<ScoredPair>& pairs) {
  for (const auto& p : pairs)
    if (!std::isfinite(p.score)) throw ConfigError("non-finite score in metric input");
}

}  // namespace

AttrSplit split_attributes(const AttributedGraph& g, const SplitSpec& spec) {
  check_ratio(spec.ratio);
  const std::vector<AttrEntry> entries = g.attr_entry_list();
  if (entries.size() < 5)
    throw ConfigError("attribute split needs at least 5 entries, have " +
                      std::to_string(entries.size()));
  const auto n_test =
      static_cast<std::size_t>(std::llround(spec.ratio * static_cast<double>(entries.size())));
  const auto idx = shuffled_indices(entries.size(), spec.seed);

  AttrSplit split;
  split.test_positives.reserve(n_test);
  std::vector<AttrEntry> train;
  train.reserve(entries.size() - n_test);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i < n_test)
      split.test_positives.push_back(entries[idx[i]]);
    else
      train.push_back(entries[idx[i]]);
  }
  split.train = make_graph(g.n, g.d, g.edge_list(), std::move(train));
  return split;
}

std::vector<std::pair<NodeId, AttrId>> sample_absent_attrs(
    const AttributedGraph& g, std::size_t count, std::uint64_t seed) {
  if (g.n == 0 || g.d == 0) throw ConfigError("cannot sample pairs from an empty graph");
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(g.attr_entries() + count);
  for (NodeId v = 0; v < g.n; ++v)
    for (std::uint64_t e = g.attr_row_offsets[v]; e < g.attr_row_offsets[v + 1]; ++e)
      taken.insert(pair_key(v, g.attr_row_ids[e]));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick_node(0, g.n - 1);
  std::uniform_int_distribution<std::uint32_t> pick_attr(0, g.d - 1);
  const std::uint64_t give_up =
      100 * std::max<std::uint64_t>(g.attr_entries(), count);

  std::vector<std::pair<NodeId, AttrId>> out;
  out.reserve(count);
  std::uint64_t rejections = 0;
  while (out.size() < count) {
    const NodeId v = pick_node(rng);
    const AttrId r = pick_attr(rng);
    if (taken.insert(pair_key(v, r)).second) {
      out.emplace_back(v, r);
    } else if (++rejections > give_up) {
      throw ConfigError("attribute matrix too dense to sample " +
                        std::to_string(count) + " absent pairs");
    }
  }
  return out;
}

LinkSplit split_links(const AttributedGraph& g, const SplitSpec& spec) {
  check_ratio(spec.ratio);
  if (g.m < 10)
    throw ConfigError("link split needs at least 10 edges, have " + std::to_string(g.m));
  const std::vector<std::pair<NodeId, NodeId>> edges = g.edge_list();
  const auto n_remove =
      static_cast<std::size_t>(std::llround(spec.ratio * static_cast<double>(g.m)));
  const auto idx = shuffled_indices(edges.size(), spec.seed);

  LinkSplit split;
  split.test.reserve(2 * n_remove);
  std::vector<std::pair<NodeId, NodeId>> kept;
  kept.reserve(edges.size() - n_remove);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& e = edges[idx[i]];
    if (i < n_remove)
      split.test.push_back({e.first, e.second, 1});
    else
      kept.push_back(e);
  }
  split.residual = make_graph(g.n, g.d, std::move(kept), g.attr_entry_list());

  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::uint32_t> pick(0, g.n - 1);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(n_remove);
  const std::uint64_t give_up = 100 * g.m;
  std::uint64_t rejections = 0;
  std::size_t sampled = 0;
  while (sampled < n_remove) {
    const NodeId i = pick(rng);
    const NodeId j = pick(rng);
    const bool fresh = i != j && !g.has_edge(i, j) && seen.insert(pair_key(i, j)).second;
    if (fresh) {
      split.test.push_back({i, j, 0});
      ++sampled;
    } else if (++rejections > give_up) {
      throw ConfigError("graph too dense to sample " + std::to_string(n_remove) +
                        " negative edges");
    }
  }
  return split;
}

double attr_score(const EmbeddingSet& emb, NodeId v, AttrId r) {
  if (static_cast<Eigen::Index>(v) >= emb.x_f.rows() ||
      static_cast<Eigen::Index>(r) >= emb.y.rows())
    throw ConfigError("attr_score id out of range");
  return (emb.x_f.row(v) + emb.x_b.row(v)).dot(emb.y.row(r));
}

LinkScorer::LinkScorer(const EmbeddingSet& emb)
    : emb_(emb), gram_(emb.y.transpose() * emb.y) {}

double LinkScorer::score(NodeId v_i, NodeId v_j, bool directed) const {
  if (static_cast<Eigen::Index>(v_i) >= emb_.x_f.rows() ||
      static_cast<Eigen::Index>(v_j) >= emb_.x_f.rows())
    throw ConfigError("link_score id out of range");
  const double forward = emb_.x_f.row(v_i).dot(gram_ * emb_.x_b.row(v_j).transpose());
  if (directed) return forward;
  const double backward = emb_.x_f.row(v_j).dot(gram_ * emb_.x_b.row(v_i).transpose());
  return forward + backward;
}

double link_score(const EmbeddingSet& emb, NodeId v_i, NodeId v_j, bool directed) {
  return LinkScorer(emb).score(v_i, v_j, directed);
}

double auc(const std::vector<ScoredPair>& pairs) {
  check_finite(pairs);
  std::size_t n_pos = 0;
  for (const auto& p : pairs) n_pos += p.label ? 1 : 0;
  const std::size_t n_neg = pairs.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw ConfigError("auc needs at least one positive and one negative");

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].score < pairs[b].score;
  });

  // Positive rank sum with midranks for ties: U = R_pos - n_pos(n_pos+1)/2.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t tied_pos = 0;
    while (j < order.size() && pairs[order[j]].score == pairs[order[i]].score) {
      tied_pos += pairs[order[j]].label ? 1 : 0;
      ++j;
    }
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum += mid_rank * static_cast<double>(tied_pos);
    i = j;
  }
  const double u = rank_sum - 0.5 * static_cast<double>(n_pos) *
                                  static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double average_precision(const std::vector<ScoredPair>& pairs) {
  check_finite(pairs);
  std::size_t n_pos = 0;
  for (const auto& p : pairs) n_pos += p.label ? 1 : 0;
  if (n_pos == 0) throw ConfigError("average_precision needs at least one positive");

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].score > pairs[b].score;
  });

  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 1; rank <= order.size(); ++rank) {
    if (pairs[order[rank - 1]].label) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank);
    }
  }
  return sum / static_cast<double>(n_pos);
}

std::string metrics_line(EvalTask task, double auc_value, double ap_value,
                         std::size_t n_pos, std::size_t n_neg, std::uint64_t seed) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "task=%s auc=%.6f ap=%.6f n_pos=%zu n_neg=%zu seed=%llu",
                task == EvalTask::attr ? "attr" : "link", auc_value, ap_value, n_pos,
                n_neg, static_cast<unsigned long long>(seed));
  return buf;
}

}  // namespace pane
