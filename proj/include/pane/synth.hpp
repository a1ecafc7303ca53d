#pragma once

#include "pane/graph.hpp"

namespace pane {

// Planted-partition generator: contiguous equal communities over nodes and
// over attribute ids; per node, fixed out-degree stubs land in the home
// community with probability edge_homophily, and attribute draws come from
// the home attribute block with probability attr_homophily. Unit weights,
// duplicates collapsed, edges directed.
struct SynthConfig {
  NodeId n = 1000;
  AttrId d = 64;
  std::uint32_t communities = 8;
  std::uint64_t seed = 1;
  double avg_degree = 10.0;
  double edge_homophily = 0.9;
  double attr_homophily = 0.9;
  std::uint32_t attrs_per_node = 5;
};

struct SynthGraph {
  NodeId n = 0;
  AttrId d = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<AttrEntry> attrs;
};

SynthGraph synth_graph(const SynthConfig& cfg);
AttributedGraph synth_attributed_graph(const SynthConfig& cfg);

std::uint32_t node_community(NodeId v, NodeId n, std::uint32_t communities);
std::uint32_t attr_community(AttrId r, AttrId d, std::uint32_t communities);

}  // namespace pane
