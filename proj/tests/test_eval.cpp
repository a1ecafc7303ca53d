#include "helpers.hpp"

#include "pane/eval.hpp"
#include "pane/pipeline.hpp"
#include "pane/synth.hpp"

#include <doctest.h>

#include <limits>
#include <map>
#include <set>

using namespace pane;

namespace {

AttributedGraph split_fixture() {
  return make_graph(6, 4,
                    {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 2}, {1, 3}, {2, 4}, {3, 5}},
                    {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}, {1, 2, 4.0}, {2, 0, 5.0},
                     {2, 3, 6.0}, {3, 2, 7.0}, {4, 1, 8.0}, {4, 3, 9.0}, {5, 0, 10.0}});
}

std::map<std::uint64_t, double> entry_map(const std::vector<AttrEntry>& entries) {
  std::map<std::uint64_t, double> out;
  for (const auto& e : entries)
    out[static_cast<std::uint64_t>(e.node) * 1000 + e.attr] = e.weight;
  return out;
}

EmbeddingSet toy_embedding() {
  EmbeddingSet emb;
  emb.x_f = ColMat(2, 2);
  emb.x_f << 1.0, 2.0, -1.0, 0.5;
  emb.x_b = ColMat(2, 2);
  emb.x_b << 3.0, 4.0, 0.25, -2.0;
  emb.y = ColMat(3, 2);
  emb.y << 0.5, 0.25, -1.0, 2.0, 0.75, 0.0;
  return emb;
}

}  // namespace

TEST_CASE("attribute split partitions the entries and keeps the topology") {
  auto g = split_fixture();
  SplitSpec spec;
  spec.ratio = 0.2;
  spec.seed = 5;
  auto split = split_attributes(g, spec);

  CHECK(split.test_positives.size() == 2);
  CHECK(split.train.attr_entries() == 8);
  CHECK(split.train.n == g.n);
  CHECK(split.train.d == g.d);
  CHECK(split.train.edge_list() == g.edge_list());

  auto train_map = entry_map(split.train.attr_entry_list());
  auto full_map = entry_map(g.attr_entry_list());
  for (const auto& e : split.test_positives) {
    const auto key = static_cast<std::uint64_t>(e.node) * 1000 + e.attr;
    CHECK(full_map.at(key) == e.weight);
    CHECK(train_map.count(key) == 0);
    train_map[key] = e.weight;
  }
  CHECK(train_map == full_map);

  auto again = split_attributes(g, spec);
  CHECK(again.test_positives.size() == split.test_positives.size());
  for (std::size_t i = 0; i < again.test_positives.size(); ++i) {
    CHECK(again.test_positives[i].node == split.test_positives[i].node);
    CHECK(again.test_positives[i].attr == split.test_positives[i].attr);
  }
}

TEST_CASE("attribute split needs enough entries and a sane ratio") {
  auto tiny = make_graph(3, 2, {{0, 1}}, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 0, 1.0}, {2, 1, 1.0}});
  SplitSpec spec;
  spec.ratio = 0.5;
  CHECK_THROWS_WITH_AS(split_attributes(tiny, spec),
                       "attribute split needs at least 5 entries, have 4", ConfigError);
  auto g = split_fixture();
  SplitSpec bad;
  bad.ratio = 1.0;
  CHECK_THROWS_AS(split_attributes(g, bad), ConfigError);
  bad.ratio = 0.0;
  CHECK_THROWS_AS(split_attributes(g, bad), ConfigError);
}

TEST_CASE("link split removes edges and samples matched negatives") {
  auto g = split_fixture();
  REQUIRE(g.m == 10);
  SplitSpec spec;
  spec.ratio = 0.3;
  spec.seed = 11;
  spec.task = EvalTask::link;
  auto split = split_links(g, spec);

  CHECK(split.residual.m == 7);
  CHECK(split.test.size() == 6);

  auto orig_edges = g.edge_list();
  std::set<std::pair<NodeId, NodeId>> orig(orig_edges.begin(), orig_edges.end());
  auto res_edges = split.residual.edge_list();
  std::set<std::pair<NodeId, NodeId>> residual(res_edges.begin(), res_edges.end());

  std::set<std::pair<NodeId, NodeId>> negatives;
  std::size_t n_pos = 0;
  for (const auto& ex : split.test) {
    if (ex.label == 1) {
      ++n_pos;
      CHECK(orig.count({ex.src, ex.dst}) == 1);
      CHECK(residual.count({ex.src, ex.dst}) == 0);
      residual.insert({ex.src, ex.dst});
    } else {
      CHECK(ex.src != ex.dst);
      CHECK(orig.count({ex.src, ex.dst}) == 0);
      CHECK(negatives.insert({ex.src, ex.dst}).second);
    }
  }
  CHECK(n_pos == 3);
  CHECK(residual == orig);
  CHECK(split.residual.attr_entries() == g.attr_entries());

  auto again = split_links(g, spec);
  REQUIRE(again.test.size() == split.test.size());
  for (std::size_t i = 0; i < again.test.size(); ++i) {
    CHECK(again.test[i].src == split.test[i].src);
    CHECK(again.test[i].dst == split.test[i].dst);
    CHECK(again.test[i].label == split.test[i].label);
  }
}

TEST_CASE("link split rejects graphs with fewer than ten edges") {
  auto g = make_graph(4, 2, {{0, 1}, {1, 2}, {2, 3}}, {{0, 0, 1.0}});
  SplitSpec spec;
  spec.ratio = 0.3;
  CHECK_THROWS_WITH_AS(split_links(g, spec), "link split needs at least 10 edges, have 3",
                       ConfigError);
}

TEST_CASE("absent attribute pairs are absent, distinct, and reproducible") {
  auto g = pane_test::random_fixture(17, 40, 8);
  std::set<std::pair<NodeId, AttrId>> present;
  for (const auto& e : g.attr_entry_list()) present.insert({e.node, e.attr});

  auto pairs = sample_absent_attrs(g, 25, 3);
  CHECK(pairs.size() == 25);
  std::set<std::pair<NodeId, AttrId>> seen;
  for (const auto& [v, r] : pairs) {
    CHECK(v < g.n);
    CHECK(r < g.d);
    CHECK(present.count({v, r}) == 0);
    CHECK(seen.insert({v, r}).second);
  }
  CHECK(sample_absent_attrs(g, 25, 3) == pairs);
  CHECK(sample_absent_attrs(g, 25, 4) != pairs);
}

TEST_CASE("absent-pair sampling gives up on saturated matrices") {
  auto full = make_graph(2, 2, {{0, 1}},
                         {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  CHECK_THROWS_WITH_AS(sample_absent_attrs(full, 1, 1),
                       "attribute matrix too dense to sample 1 absent pairs", ConfigError);
}

TEST_CASE("attr_score is the shifted inner product") {
  auto emb = toy_embedding();
  // (x_f[0] + x_b[0]) . y[2] = (4, 6) . (0.75, 0) = 3
  CHECK(attr_score(emb, 0, 2) == doctest::Approx(3.0));
  CHECK(attr_score(emb, 1, 0) ==
        doctest::Approx((emb.x_f.row(1) + emb.x_b.row(1)).dot(emb.y.row(0))));
  CHECK_THROWS_AS(attr_score(emb, 2, 0), ConfigError);
  CHECK_THROWS_AS(attr_score(emb, 0, 3), ConfigError);
}

TEST_CASE("link scores fold the per-attribute sum through the Gram matrix") {
  auto emb = toy_embedding();
  LinkScorer scorer(emb);
  for (NodeId i = 0; i < 2; ++i) {
    for (NodeId j = 0; j < 2; ++j) {
      double literal = 0.0;
      for (Eigen::Index r = 0; r < emb.y.rows(); ++r)
        literal += emb.x_f.row(i).dot(emb.y.row(r)) * emb.x_b.row(j).dot(emb.y.row(r));
      CHECK(scorer.score(i, j, true) == doctest::Approx(literal).epsilon(1e-10));
      CHECK(scorer.score(i, j, false) ==
            doctest::Approx(scorer.score(i, j, true) + scorer.score(j, i, true)));
      CHECK(link_score(emb, i, j, true) == doctest::Approx(scorer.score(i, j, true)));
    }
  }
  CHECK_THROWS_AS(scorer.score(0, 9, true), ConfigError);

  EmbeddingSet ortho = emb;
  ortho.y = ColMat::Identity(2, 2);
  // With Y orthonormal the score collapses to x_f[i] . x_b[j].
  CHECK(link_score(ortho, 0, 1, true) ==
        doctest::Approx(ortho.x_f.row(0).dot(ortho.x_b.row(1))));
}

TEST_CASE("auc handles separation, ties, and tied groups") {
  CHECK(auc({{0.9, 1}, {0.8, 1}, {0.2, 0}, {0.1, 0}}) == doctest::Approx(1.0));
  CHECK(auc({{0.1, 1}, {0.2, 1}, {0.8, 0}, {0.9, 0}}) == doctest::Approx(0.0));
  CHECK(auc({{0.5, 1}, {0.5, 0}, {0.5, 1}, {0.5, 0}}) == doctest::Approx(0.5));
  CHECK(auc({{0.8, 1}, {0.4, 1}, {0.6, 0}, {0.2, 0}}) == doctest::Approx(0.75));
}

TEST_CASE("auc is invariant under strictly monotone score transforms") {
  std::vector<ScoredPair> base = {{0.8, 1}, {0.4, 1}, {0.6, 0}, {0.2, 0}, {0.55, 1}};
  const double reference = auc(base);
  auto scaled = base;
  for (auto& p : scaled) p.score = 3.0 * p.score - 10.0;
  CHECK(auc(scaled) == doctest::Approx(reference));
  auto warped = base;
  for (auto& p : warped) p.score = std::tanh(5.0 * p.score);
  CHECK(auc(warped) == doctest::Approx(reference));
}

TEST_CASE("metric inputs are validated") {
  CHECK_THROWS_AS(auc({{0.5, 1}, {0.4, 1}}), ConfigError);
  CHECK_THROWS_AS(auc({{0.5, 0}}), ConfigError);
  CHECK_THROWS_WITH_AS(auc({{std::numeric_limits<double>::quiet_NaN(), 1}, {0.1, 0}}),
                       "non-finite score in metric input", ConfigError);
  CHECK_THROWS_AS(average_precision({{0.5, 0}, {0.4, 0}}), ConfigError);
  CHECK_THROWS_AS(
      average_precision({{std::numeric_limits<double>::infinity(), 1}, {0.1, 0}}),
      ConfigError);
}

TEST_CASE("average precision follows the ranked hit fractions") {
  CHECK(average_precision({{0.9, 1}, {0.8, 1}, {0.2, 0}}) == doctest::Approx(1.0));
  CHECK(average_precision({{0.9, 0}, {0.1, 1}}) == doctest::Approx(0.5));
  // Positives land at ranks 1 and 3: (1/1 + 2/3) / 2.
  CHECK(average_precision({{0.8, 1}, {0.4, 1}, {0.6, 0}, {0.2, 0}}) ==
        doctest::Approx(5.0 / 6.0));
  // Ties keep stable input order: positives stay at ranks 1 and 3.
  CHECK(average_precision({{0.5, 1}, {0.5, 0}, {0.5, 1}}) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("metrics_line prints the frozen format") {
  CHECK(metrics_line(EvalTask::attr, 0.75, 5.0 / 6.0, 2, 2, 7) ==
        "task=attr auc=0.750000 ap=0.833333 n_pos=2 n_neg=2 seed=7");
  CHECK(metrics_line(EvalTask::link, 1.0, 0.5, 30, 40, 18446744073709551615ULL) ==
        "task=link auc=1.000000 ap=0.500000 n_pos=30 n_neg=40 seed=18446744073709551615");
}

TEST_CASE("embeddings rank held-out edges above sampled non-edges") {
  SynthConfig sc;
  sc.n = 200;
  sc.d = 16;
  sc.communities = 4;
  sc.seed = 9;
  sc.avg_degree = 8.0;
  auto g = synth_attributed_graph(sc);

  SplitSpec spec;
  spec.ratio = 0.3;
  spec.seed = 9;
  spec.task = EvalTask::link;
  auto split = split_links(g, spec);

  PaneConfig cfg;
  cfg.k = 8;
  auto emb = pane::pane(split.residual, cfg);
  LinkScorer scorer(emb);

  std::vector<ScoredPair> pairs;
  double pos_mean = 0.0, neg_mean = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& ex : split.test) {
    const double s = scorer.score(ex.src, ex.dst, false);
    pairs.push_back({s, ex.label});
    if (ex.label) {
      pos_mean += s;
      ++n_pos;
    } else {
      neg_mean += s;
      ++n_neg;
    }
  }
  pos_mean /= static_cast<double>(n_pos);
  neg_mean /= static_cast<double>(n_neg);
  CHECK(pos_mean > neg_mean);
  CHECK(auc(pairs) > 0.6);
}
