#include "pane/eval.hpp"
#include "pane/pipeline.hpp"
#include "pane/storage.hpp"
#include "pane/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

struct PaneFlags {
  int k = 128;
  double alpha = 0.5;
  double epsilon = 0.015;
  int threads = 1;
  std::uint64_t seed = 1;
  int svd_iters = 0;
  int sweeps = -1;
  bool undirected = false;
};

void add_pane_flags(CLI::App& cmd, PaneFlags& f) {
  cmd.add_option("--k", f.k, "embedding dimension (even)");
  cmd.add_option("--alpha", f.alpha, "random walk stopping probability");
  cmd.add_option("--epsilon", f.epsilon, "walk truncation error threshold");
  cmd.add_option("--threads", f.threads, "worker count n_b");
  cmd.add_option("--seed", f.seed, "random seed");
  cmd.add_option("--svd-iters", f.svd_iters, "SVD subspace iterations (0: use t)");
  cmd.add_option("--sweeps", f.sweeps, "CCD sweeps (negative: use t)");
  cmd.add_flag("--undirected", f.undirected, "treat edges as undirected");
}

pane::PaneConfig make_config(const PaneFlags& f) {
  pane::PaneConfig cfg;
  cfg.k = f.k;
  cfg.alpha = f.alpha;
  cfg.epsilon = f.epsilon;
  cfg.n_b = f.threads;
  cfg.svd_power_iters = f.svd_iters;
  cfg.ccd_sweeps = f.sweeps;
  cfg.seed = f.seed;
  return cfg;
}

pane::AttributedGraph load(const std::string& edges, const std::string& attrs,
                           bool undirected) {
  pane::LoadOptions opts;
  opts.directed = !undirected;
  return pane::load_graph_files(edges, attrs, opts);
}

std::ofstream open_sink(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw pane::IoError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_source(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw pane::IoError("cannot open " + path);
  return in;
}

void print_timings(const pane::PhaseTimings& t) {
  std::fprintf(stderr, "phase=affinity seconds=%.3f\n", t.affinity);
  std::fprintf(stderr, "phase=init seconds=%.3f\n", t.init);
  std::fprintf(stderr, "phase=ccd seconds=%.3f\n", t.ccd);
}

int cmd_embed(const std::string& edges, const std::string& attrs,
              const std::string& out, const PaneFlags& f) {
  const pane::AttributedGraph g = load(edges, attrs, f.undirected);
  pane::PhaseTimings timings;
  const pane::EmbeddingSet emb = pane::pane(g, make_config(f), &timings);
  print_timings(timings);
  auto sink = open_sink(out, std::ios::binary);
  pane::save_embeddings(emb, make_config(f), sink);
  return 0;
}

int cmd_eval_link(const std::string& edges, const std::string& attrs, double ratio,
                  const PaneFlags& f) {
  const pane::AttributedGraph g = load(edges, attrs, f.undirected);
  pane::SplitSpec spec;
  spec.ratio = ratio;
  spec.seed = f.seed;
  spec.task = pane::EvalTask::link;
  const pane::LinkSplit split = pane::split_links(g, spec);
  const pane::EmbeddingSet emb = pane::pane(split.residual, make_config(f));
  const pane::LinkScorer scorer(emb);
  std::vector<pane::ScoredPair> scored;
  scored.reserve(split.test.size());
  std::size_t n_pos = 0;
  for (const auto& e : split.test) {
    scored.push_back({scorer.score(e.src, e.dst, !f.undirected), e.label});
    n_pos += e.label ? 1 : 0;
  }
  std::cout << pane::metrics_line(pane::EvalTask::link, pane::auc(scored),
                                  pane::average_precision(scored), n_pos,
                                  scored.size() - n_pos, f.seed)
            << "\n";
  return 0;
}

int cmd_eval_attr(const std::string& edges, const std::string& attrs, double ratio,
                  const PaneFlags& f) {
  const pane::AttributedGraph g = load(edges, attrs, f.undirected);
  pane::SplitSpec spec;
  spec.ratio = ratio;
  spec.seed = f.seed;
  spec.task = pane::EvalTask::attr;
  const pane::AttrSplit split = pane::split_attributes(g, spec);
  const pane::EmbeddingSet emb = pane::pane(split.train, make_config(f));
  // Negatives are sampled against the full entry set so no held-out positive
  // can be drawn as a negative.
  const auto negatives = pane::sample_absent_attrs(
      g, split.test_positives.size(), f.seed ^ 0x6a09e667f3bcc909ULL);
  std::vector<pane::ScoredPair> scored;
  scored.reserve(2 * split.test_positives.size());
  for (const auto& e : split.test_positives)
    scored.push_back({pane::attr_score(emb, e.node, e.attr), 1});
  for (const auto& p : negatives)
    scored.push_back({pane::attr_score(emb, p.first, p.second), 0});
  std::cout << pane::metrics_line(pane::EvalTask::attr, pane::auc(scored),
                                  pane::average_precision(scored),
                                  split.test_positives.size(), negatives.size(),
                                  f.seed)
            << "\n";
  return 0;
}

int cmd_export(const std::string& in, const std::string& out) {
  auto source = open_source(in, std::ios::binary);
  const auto [emb, meta] = pane::load_embeddings(source);
  auto sink = open_sink(out, std::ios::out);
  const std::uint64_t lines = pane::export_tsv(emb, sink);
  std::fprintf(stderr, "lines=%llu\n", static_cast<unsigned long long>(lines));
  return 0;
}

int cmd_synth(const pane::SynthConfig& cfg, const std::string& edges_out,
              const std::string& attrs_out) {
  const pane::AttributedGraph g = pane::synth_attributed_graph(cfg);
  auto edge_sink = open_sink(edges_out, std::ios::out);
  auto attr_sink = open_sink(attrs_out, std::ios::out);
  pane::save_graph(g, edge_sink, attr_sink);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attributed-network embeddings from truncated random walks"};
  app.require_subcommand(1);

  PaneFlags flags;
  std::string edges_path, attrs_path, out_path, in_path;
  double ratio = 0.0;

  auto* embed = app.add_subcommand("embed", "embed a graph and write an archive");
  embed->add_option("--edges", edges_path, "edge list file")->required();
  embed->add_option("--attrs", attrs_path, "attribute triple file")->required();
  embed->add_option("--out", out_path, "output archive path")->required();
  add_pane_flags(*embed, flags);

  auto* eval_link = app.add_subcommand("eval-link", "link-prediction protocol");
  eval_link->add_option("--edges", edges_path, "edge list file")->required();
  eval_link->add_option("--attrs", attrs_path, "attribute triple file")->required();
  eval_link->add_option("--ratio", ratio, "removed-edge fraction (default 0.3)");
  add_pane_flags(*eval_link, flags);

  auto* eval_attr = app.add_subcommand("eval-attr", "attribute-inference protocol");
  eval_attr->add_option("--edges", edges_path, "edge list file")->required();
  eval_attr->add_option("--attrs", attrs_path, "attribute triple file")->required();
  eval_attr->add_option("--ratio", ratio, "held-out entry fraction (default 0.2)");
  add_pane_flags(*eval_attr, flags);

  auto* exp = app.add_subcommand("export", "archive to TSV");
  exp->add_option("--in", in_path, "embedding archive")->required();
  exp->add_option("--out", out_path, "TSV path")->required();

  pane::SynthConfig synth_cfg;
  auto* synth = app.add_subcommand("synth", "planted-partition generator");
  synth->add_option("--n", synth_cfg.n, "node count");
  synth->add_option("--d", synth_cfg.d, "attribute count");
  synth->add_option("--communities", synth_cfg.communities, "community count");
  synth->add_option("--seed", synth_cfg.seed, "random seed");
  synth->add_option("--avg-degree", synth_cfg.avg_degree, "out-stubs per node");
  synth->add_option("--edge-homophily", synth_cfg.edge_homophily,
                    "same-community edge probability");
  synth->add_option("--attr-homophily", synth_cfg.attr_homophily,
                    "same-community attribute probability");
  synth->add_option("--attrs-per-node", synth_cfg.attrs_per_node,
                    "distinct attributes per node");
  synth->add_option("--edges-out", edges_path, "edge list output")->required();
  synth->add_option("--attrs-out", attrs_path, "attribute output")->required();

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(embed)) return cmd_embed(edges_path, attrs_path, out_path, flags);
    if (app.got_subcommand(eval_link))
      return cmd_eval_link(edges_path, attrs_path, ratio > 0.0 ? ratio : 0.3, flags);
    if (app.got_subcommand(eval_attr))
      return cmd_eval_attr(edges_path, attrs_path, ratio > 0.0 ? ratio : 0.2, flags);
    if (app.got_subcommand(exp)) return cmd_export(in_path, out_path);
    if (app.got_subcommand(synth)) return cmd_synth(synth_cfg, edges_path, attrs_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const pane::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const pane::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
