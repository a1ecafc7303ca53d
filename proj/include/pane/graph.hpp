#pragma once

#include "pane/types.hpp"

#include <iosfwd>
#include <utility>

namespace pane {

struct AttrEntry {
  NodeId node = 0;
  AttrId attr = 0;
  double weight = 0.0;
};

// Directed graph with unit edge weights plus weighted node-attribute
// associations, the latter stored in both row and column order.
struct AttributedGraph {
  NodeId n = 0;
  AttrId d = 0;
  std::uint64_t m = 0;

  std::vector<std::uint64_t> adj_offsets;  // n+1
  std::vector<NodeId> adj_targets;         // m, sorted within each row

  std::vector<std::uint64_t> attr_row_offsets;  // n+1
  std::vector<AttrId> attr_row_ids;
  std::vector<double> attr_row_weights;

  std::vector<std::uint64_t> attr_col_offsets;  // d+1
  std::vector<NodeId> attr_col_nodes;
  std::vector<double> attr_col_weights;

  std::uint64_t attr_entries() const { return attr_row_ids.size(); }
  std::uint32_t out_degree(NodeId v) const {
    return static_cast<std::uint32_t>(adj_offsets[v + 1] - adj_offsets[v]);
  }
  bool has_edge(NodeId src, NodeId dst) const;
  std::vector<AttrEntry> attr_entry_list() const;  // row-major order
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;
};

struct LoadOptions {
  bool directed = true;
  // Reject ids in [0,n)/[0,d) that appear nowhere instead of keeping them
  // as isolated rows.
  bool strict_ids = false;
};

// Assemble and validate a graph from parts. n/d of 0 mean "infer from max id".
// Duplicate directed edges are collapsed; duplicate attribute entries are an error.
AttributedGraph make_graph(NodeId n, AttrId d,
                           std::vector<std::pair<NodeId, NodeId>> edges,
                           std::vector<AttrEntry> attrs, bool strict_ids = false);

// Edge lines "src\tdst", attribute lines "node\tattr\tweight" (any blank
// separator accepted), '#' comment lines ignored, optional "%n <int> %d <int>"
// header pins dimensions. Errors cite 1-based line numbers.
AttributedGraph load_graph(std::istream& edge_source, std::istream& attr_source,
                           const LoadOptions& opts = {});
AttributedGraph load_graph_files(const std::string& edge_path,
                                 const std::string& attr_path,
                                 const LoadOptions& opts = {});

// Inverse of load_graph (writes the %n/%d header; weights with full precision).
void save_graph(const AttributedGraph& g, std::ostream& edge_sink,
                std::ostream& attr_sink);

// Row-stochastic P in CSR form; dangling rows repaired with a unit self-loop.
struct RandomWalkMatrix {
  NodeId n = 0;
  std::vector<std::uint64_t> offsets;
  std::vector<NodeId> targets;
  std::vector<double> values;
};

RandomWalkMatrix random_walk_matrix(const AttributedGraph& g);

// R_r (rows of R scaled to sum 1) and R_c (columns scaled to sum 1), sharing
// one column-major sparsity pattern. Zero rows/columns of R stay zero.
struct NormalizedAttributes {
  NodeId n = 0;
  AttrId d = 0;
  std::vector<std::uint64_t> col_offsets;  // d+1
  std::vector<NodeId> col_nodes;
  std::vector<double> rr_values;  // R_r laid out on the column pattern
  std::vector<double> rc_values;  // R_c, same pattern
};

NormalizedAttributes normalize_attributes(const AttributedGraph& g);

}  // namespace pane
