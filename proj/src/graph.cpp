#include "pane/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace pane {

bool AttributedGraph::has_edge(NodeId src, NodeId dst) const {
  auto first = adj_targets.begin() + static_cast<std::ptrdiff_t>(adj_offsets[src]);
  auto last = adj_targets.begin() + static_cast<std::ptrdiff_t>(adj_offsets[src + 1]);
  return std::binary_search(first, last, dst);
}

std::vector<AttrEntry> AttributedGraph::attr_entry_list() const {
  std::vector<AttrEntry> out;
  out.reserve(attr_row_ids.size());
  for (NodeId v = 0; v < n; ++v)
    for (std::uint64_t i = attr_row_offsets[v]; i < attr_row_offsets[v + 1]; ++i)
      out.push_back({v, attr_row_ids[i], attr_row_weights[i]});
  return out;
}

std::vector<std::pair<NodeId, NodeId>> AttributedGraph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(m);
  for (NodeId v = 0; v < n; ++v)
    for (std::uint64_t i = adj_offsets[v]; i < adj_offsets[v + 1]; ++i)
      out.emplace_back(v, adj_targets[i]);
  return out;
}

AttributedGraph make_graph(NodeId n, AttrId d,
                           std::vector<std::pair<NodeId, NodeId>> edges,
                           std::vector<AttrEntry> attrs, bool strict_ids) {
  NodeId max_node = 0;
  AttrId max_attr = 0;
  bool any_node = false, any_attr = false;
  for (const auto& [s, t] : edges) {
    max_node = std::max({max_node, s, t});
    any_node = true;
  }
  for (const auto& e : attrs) {
    max_node = std::max(max_node, e.node);
    max_attr = std::max(max_attr, e.attr);
    any_node = true;
    any_attr = true;
  }
  if (n == 0) n = any_node ? max_node + 1 : 0;
  if (d == 0) d = any_attr ? max_attr + 1 : 0;
  if (any_node && max_node >= n)
    throw IoError("node id " + std::to_string(max_node) +
                  " out of range [0," + std::to_string(n) + ")");
  if (any_attr && max_attr >= d)
    throw IoError("attribute id " + std::to_string(max_attr) +
                  " out of range [0," + std::to_string(d) + ")");
  for (const auto& e : attrs)
    if (!(e.weight > 0.0))
      throw IoError("non-positive attribute weight for node " +
                    std::to_string(e.node));

  AttributedGraph g;
  g.n = n;
  g.d = d;

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.m = edges.size();
  g.adj_offsets.assign(n + 1, 0);
  for (const auto& [s, t] : edges) {
    (void)t;
    ++g.adj_offsets[s + 1];
  }
  for (NodeId v = 0; v < n; ++v) g.adj_offsets[v + 1] += g.adj_offsets[v];
  g.adj_targets.resize(edges.size());
  {
    std::vector<std::uint64_t> cur(g.adj_offsets.begin(), g.adj_offsets.end() - 1);
    for (const auto& [s, t] : edges) g.adj_targets[cur[s]++] = t;
  }

  std::sort(attrs.begin(), attrs.end(), [](const AttrEntry& a, const AttrEntry& b) {
    return a.node != b.node ? a.node < b.node : a.attr < b.attr;
  });
  for (std::size_t i = 1; i < attrs.size(); ++i)
    if (attrs[i].node == attrs[i - 1].node && attrs[i].attr == attrs[i - 1].attr)
      throw IoError("duplicate attribute entry (" + std::to_string(attrs[i].node) +
                    "," + std::to_string(attrs[i].attr) + ")");

  g.attr_row_offsets.assign(n + 1, 0);
  g.attr_col_offsets.assign(d + 1, 0);
  for (const auto& e : attrs) {
    ++g.attr_row_offsets[e.node + 1];
    ++g.attr_col_offsets[e.attr + 1];
  }
  for (NodeId v = 0; v < n; ++v) g.attr_row_offsets[v + 1] += g.attr_row_offsets[v];
  for (AttrId r = 0; r < d; ++r) g.attr_col_offsets[r + 1] += g.attr_col_offsets[r];
  g.attr_row_ids.resize(attrs.size());
  g.attr_row_weights.resize(attrs.size());
  g.attr_col_nodes.resize(attrs.size());
  g.attr_col_weights.resize(attrs.size());
  {
    std::vector<std::uint64_t> cur(g.attr_row_offsets.begin(),
                                   g.attr_row_offsets.end() - 1);
    for (const auto& e : attrs) {
      g.attr_row_ids[cur[e.node]] = e.attr;
      g.attr_row_weights[cur[e.node]] = e.weight;
      ++cur[e.node];
    }
  }
  {
    std::vector<std::uint64_t> cur(g.attr_col_offsets.begin(),
                                   g.attr_col_offsets.end() - 1);
    for (const auto& e : attrs) {  // node-sorted input keeps columns node-sorted
      g.attr_col_nodes[cur[e.attr]] = e.node;
      g.attr_col_weights[cur[e.attr]] = e.weight;
      ++cur[e.attr];
    }
  }

  if (strict_ids) {
    std::vector<char> node_seen(n, 0), attr_seen(d, 0);
    for (const auto& [s, t] : edges) node_seen[s] = node_seen[t] = 1;
    for (const auto& e : attrs) {
      node_seen[e.node] = 1;
      attr_seen[e.attr] = 1;
    }
    for (NodeId v = 0; v < n; ++v)
      if (!node_seen[v])
        throw IoError("strict mode: node id " + std::to_string(v) +
                      " never observed");
    for (AttrId r = 0; r < d; ++r)
      if (!attr_seen[r])
        throw IoError("strict mode: attribute id " + std::to_string(r) +
                      " never observed");
  }
  return g;
}

namespace {

struct HeaderPin {
  NodeId n = 0;
  AttrId d = 0;
};

bool parse_header(const std::string& line, HeaderPin& pin, std::size_t lineno) {
  if (line.empty() || line[0] != '%') return false;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    if (tok == "%n" || tok == "%d") {
      long long v = 0;
      if (!(ss >> v) || v < 0)
        throw IoError("bad header at line " + std::to_string(lineno));
      if (tok == "%n")
        pin.n = static_cast<NodeId>(v);
      else
        pin.d = static_cast<AttrId>(v);
    } else {
      throw IoError("unknown header token '" + tok + "' at line " +
                    std::to_string(lineno));
    }
  }
  return true;
}

bool skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

long long parse_id(const std::string& tok, std::size_t lineno, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || v < 0)
    throw IoError(std::string("malformed ") + what + " at line " +
                  std::to_string(lineno));
  return v;
}

}  // namespace

AttributedGraph load_graph(std::istream& edge_source, std::istream& attr_source,
                           const LoadOptions& opts) {
  HeaderPin pin;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(edge_source, line)) {
    ++lineno;
    if (parse_header(line, pin, lineno) || skippable(line)) continue;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra))
      throw IoError("malformed edge line " + std::to_string(lineno));
    auto s = static_cast<NodeId>(parse_id(a, lineno, "edge src"));
    auto t = static_cast<NodeId>(parse_id(b, lineno, "edge dst"));
    edges.emplace_back(s, t);
    if (!opts.directed) edges.emplace_back(t, s);
  }

  std::vector<AttrEntry> attrs;
  lineno = 0;
  while (std::getline(attr_source, line)) {
    ++lineno;
    if (parse_header(line, pin, lineno) || skippable(line)) continue;
    std::istringstream ss(line);
    std::string a, b, c, extra;
    if (!(ss >> a >> b >> c) || (ss >> extra))
      throw IoError("malformed attribute line " + std::to_string(lineno));
    AttrEntry e;
    e.node = static_cast<NodeId>(parse_id(a, lineno, "attribute node id"));
    e.attr = static_cast<AttrId>(parse_id(b, lineno, "attribute id"));
    try {
      std::size_t used = 0;
      e.weight = std::stod(c, &used);
      if (used != c.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw IoError("malformed weight at line " + std::to_string(lineno));
    }
    if (!(e.weight > 0.0))
      throw IoError("non-positive weight at line " + std::to_string(lineno));
    attrs.push_back(e);
  }
  return make_graph(pin.n, pin.d, std::move(edges), std::move(attrs),
                    opts.strict_ids);
}

AttributedGraph load_graph_files(const std::string& edge_path,
                                 const std::string& attr_path,
                                 const LoadOptions& opts) {
  std::ifstream ef(edge_path);
  if (!ef) throw IoError("cannot open edge file: " + edge_path);
  std::ifstream af(attr_path);
  if (!af) throw IoError("cannot open attribute file: " + attr_path);
  return load_graph(ef, af, opts);
}

void save_graph(const AttributedGraph& g, std::ostream& edge_sink,
                std::ostream& attr_sink) {
  edge_sink << "%n " << g.n << " %d " << g.d << "\n";
  attr_sink << "%n " << g.n << " %d " << g.d << "\n";
  for (NodeId v = 0; v < g.n; ++v)
    for (std::uint64_t i = g.adj_offsets[v]; i < g.adj_offsets[v + 1]; ++i)
      edge_sink << v << "\t" << g.adj_targets[i] << "\n";
  char buf[64];
  for (NodeId v = 0; v < g.n; ++v)
    for (std::uint64_t i = g.attr_row_offsets[v]; i < g.attr_row_offsets[v + 1]; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", g.attr_row_weights[i]);
      attr_sink << v << "\t" << g.attr_row_ids[i] << "\t" << buf << "\n";
    }
}

RandomWalkMatrix random_walk_matrix(const AttributedGraph& g) {
  RandomWalkMatrix p;
  p.n = g.n;
  p.offsets.assign(g.n + 1, 0);
  std::uint64_t nnz = 0;
  for (NodeId v = 0; v < g.n; ++v)
    nnz += g.out_degree(v) > 0 ? g.out_degree(v) : 1;  // dangling: self-loop
  p.targets.resize(nnz);
  p.values.resize(nnz);
  std::uint64_t at = 0;
  for (NodeId v = 0; v < g.n; ++v) {
    p.offsets[v] = at;
    std::uint32_t deg = g.out_degree(v);
    if (deg == 0) {
      p.targets[at] = v;
      p.values[at] = 1.0;
      ++at;
      continue;
    }
    double w = 1.0 / deg;
    for (std::uint64_t i = g.adj_offsets[v]; i < g.adj_offsets[v + 1]; ++i) {
      p.targets[at] = g.adj_targets[i];
      p.values[at] = w;
      ++at;
    }
  }
  p.offsets[g.n] = at;
  return p;
}

NormalizedAttributes normalize_attributes(const AttributedGraph& g) {
  std::vector<double> row_sum(g.n, 0.0);
  for (NodeId v = 0; v < g.n; ++v)
    for (std::uint64_t i = g.attr_row_offsets[v]; i < g.attr_row_offsets[v + 1]; ++i)
      row_sum[v] += g.attr_row_weights[i];

  NormalizedAttributes na;
  na.n = g.n;
  na.d = g.d;
  na.col_offsets = g.attr_col_offsets;
  na.col_nodes = g.attr_col_nodes;
  na.rr_values.resize(g.attr_col_weights.size());
  na.rc_values.resize(g.attr_col_weights.size());
  for (AttrId r = 0; r < g.d; ++r) {
    double col_sum = 0.0;
    for (std::uint64_t i = g.attr_col_offsets[r]; i < g.attr_col_offsets[r + 1]; ++i)
      col_sum += g.attr_col_weights[i];
    for (std::uint64_t i = g.attr_col_offsets[r]; i < g.attr_col_offsets[r + 1]; ++i) {
      na.rr_values[i] = g.attr_col_weights[i] / row_sum[g.attr_col_nodes[i]];
      na.rc_values[i] = g.attr_col_weights[i] / col_sum;
    }
  }
  return na;
}

Partition contiguous_partition(std::uint32_t count, std::uint32_t blocks) {
  if (blocks == 0) throw ConfigError("partition needs at least one block");
  Partition part(blocks);
  std::uint64_t per = (count + blocks - 1) / blocks;
  for (std::uint32_t b = 0; b < blocks; ++b) {
    std::uint64_t lo = b * per, hi = std::min<std::uint64_t>(count, lo + per);
    for (std::uint64_t i = lo; i < hi; ++i)
      part[b].push_back(static_cast<std::uint32_t>(i));
  }
  return part;
}

void validate_partition(const Partition& part, std::uint32_t count,
                        const char* what) {
  std::vector<char> seen(count, 0);
  std::uint64_t total = 0;
  for (const auto& block : part) {
    for (std::uint32_t id : block) {
      if (id >= count || seen[id])
        throw ConfigError(std::string(what) +
                          " partition invalid: id " + std::to_string(id) +
                          (id >= count ? " out of range" : " duplicated"));
      seen[id] = 1;
      ++total;
    }
  }
  if (total != count)
    throw ConfigError(std::string(what) + " partition invalid: covers " +
                      std::to_string(total) + " of " + std::to_string(count) +
                      " ids");
}

}  // namespace pane
