#pragma once

#include "pane/factorization.hpp"
#include "pane/graph.hpp"

#include <string>
#include <utility>

namespace pane {

enum class EvalTask { attr, link };

struct SplitSpec {
  double ratio = 0.2;
  std::uint64_t seed = 1;
  EvalTask task = EvalTask::attr;
};

struct ScoredPair {
  double score = 0.0;
  int label = 0;
};

struct AttrSplit {
  AttributedGraph train;
  std::vector<AttrEntry> test_positives;
};

// Uniform seeded split of the nonzero attribute entries; the train graph keeps
// the full topology. round(ratio * entries) test entries.
AttrSplit split_attributes(const AttributedGraph& g, const SplitSpec& spec);

// Uniformly sampled (node, attr) pairs absent from g's entries, distinct,
// for scoring against test positives. Gives up after 100*entries rejections.
std::vector<std::pair<NodeId, AttrId>> sample_absent_attrs(
    const AttributedGraph& g, std::size_t count, std::uint64_t seed);

struct LinkExample {
  NodeId src = 0;
  NodeId dst = 0;
  int label = 0;
};

struct LinkSplit {
  AttributedGraph residual;
  std::vector<LinkExample> test;  // removed edges (label 1) then negatives (label 0)
};

// Removes round(ratio*m) directed edges; samples an equal count of distinct
// node pairs absent from the original edge set (self-pairs excluded),
// rejection sampling with a 100*m give-up guard.
LinkSplit split_links(const AttributedGraph& g, const SplitSpec& spec);

// (X_f[v] + X_b[v]) . Y[r]
double attr_score(const EmbeddingSet& emb, NodeId v, AttrId r);

// Link scores via the precomputed (k/2)^2 Gram matrix of Y:
// p(i,j) = X_f[i] (Y^T Y) X_b[j]^T, folding the per-attribute score sum.
class LinkScorer {
 public:
  explicit LinkScorer(const EmbeddingSet& emb);
  double score(NodeId v_i, NodeId v_j, bool directed) const;

 private:
  const EmbeddingSet& emb_;
  ColMat gram_;
};

// Convenience wrapper (builds the Gram matrix per call; use LinkScorer in loops).
double link_score(const EmbeddingSet& emb, NodeId v_i, NodeId v_j, bool directed);

// Mann-Whitney rank AUC, ties counted 0.5. Needs >=1 positive and >=1 negative.
double auc(const std::vector<ScoredPair>& pairs);

// Mean of precision at each positive's rank, scores descending, ties kept in
// stable input order. Needs >=1 positive.
double average_precision(const std::vector<ScoredPair>& pairs);

std::string metrics_line(EvalTask task, double auc_value, double ap_value,
                         std::size_t n_pos, std::size_t n_neg, std::uint64_t seed);

}  // namespace pane
