#pragma once

#include "pane/affinity.hpp"
#include "pane/graph.hpp"

#include <random>
#include <utility>
#include <vector>

namespace pane_test {

using namespace pane;

// 3-node directed path 0->1->2 (node 2 dangling) with weighted attributes;
// small enough that the walk matrices were derived by hand in the tests.
inline AttributedGraph path3() {
  return make_graph(3, 2, {{0, 1}, {1, 2}},
                    {{0, 0, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}, {2, 1, 1.0}});
}

// 3-node directed cycle with unit-weight attributes {v0:r0, v1:{r0,r1}, v2:r1}.
inline AttributedGraph cycle3() {
  return make_graph(3, 2, {{0, 1}, {1, 2}, {2, 0}},
                    {{0, 0, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}, {2, 1, 1.0}});
}

// Seeded sparse directed graph with irregular attribute coverage: ~10% of
// nodes dangling, ~15% without attributes, weights in [0.2, 2.0].
inline AttributedGraph random_fixture(std::uint64_t seed, std::uint32_t n,
                                      std::uint32_t d) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.2, 2.0);
  std::uniform_int_distribution<std::uint32_t> pick_node(0, n - 1);
  std::uniform_int_distribution<std::uint32_t> pick_attr(0, d - 1);
  std::uniform_int_distribution<std::uint32_t> attr_count(1, 4);

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<AttrEntry> attrs;
  const double degree = 4.0;
  for (NodeId v = 0; v < n; ++v) {
    if (unit(rng) < 0.1) continue;  // dangling
    const auto stubs = 1 + static_cast<std::uint32_t>(unit(rng) * degree);
    for (std::uint32_t s = 0; s < stubs; ++s) {
      const NodeId u = pick_node(rng);
      if (u != v) edges.emplace_back(v, u);
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (unit(rng) < 0.15) continue;  // attribute-free
    std::vector<bool> seen(d, false);
    const std::uint32_t want = attr_count(rng);
    for (std::uint32_t s = 0; s < want; ++s) {
      const AttrId r = pick_attr(rng);
      if (!seen[r]) {
        seen[r] = true;
        attrs.push_back({v, r, weight(rng)});
      }
    }
  }
  return make_graph(n, d, std::move(edges), std::move(attrs));
}

inline double max_abs_diff(const RowMat& a, const RowMat& b) {
  if (a.size() == 0 && b.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ColMat& a, const ColMat& b) {
  if (a.size() == 0 && b.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace pane_test
