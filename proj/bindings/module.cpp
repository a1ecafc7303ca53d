#include "pane/eval.hpp"
#include "pane/pipeline.hpp"
#include "pane/storage.hpp"
#include "pane/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <tuple>

namespace py = pybind11;

namespace {

pane::PaneConfig config_from(int k, double alpha, double epsilon, int threads,
                             std::uint64_t seed, int svd_iters, int sweeps) {
  pane::PaneConfig cfg;
  cfg.k = k;
  cfg.alpha = alpha;
  cfg.epsilon = epsilon;
  cfg.n_b = threads;
  cfg.seed = seed;
  cfg.svd_power_iters = svd_iters;
  cfg.ccd_sweeps = sweeps;
  return cfg;
}

std::vector<pane::ScoredPair> zip_scores(const std::vector<double>& scores,
                                         const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw pane::ConfigError("scores and labels must have equal length");
  std::vector<pane::ScoredPair> pairs(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) pairs[i] = {scores[i], labels[i]};
  return pairs;
}

}  // namespace

PYBIND11_MODULE(pane, m) {
  m.doc() = "attributed-network embeddings from truncated random walks";

  py::register_exception<pane::IoError>(m, "IoError", PyExc_IOError);
  py::register_exception<pane::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<pane::AttributedGraph>(m, "Graph")
      .def_readonly("n", &pane::AttributedGraph::n)
      .def_readonly("d", &pane::AttributedGraph::d)
      .def_readonly("m", &pane::AttributedGraph::m)
      .def("attr_entries", &pane::AttributedGraph::attr_entries)
      .def("out_degree", &pane::AttributedGraph::out_degree, py::arg("v"))
      .def("has_edge", &pane::AttributedGraph::has_edge, py::arg("src"), py::arg("dst"))
      .def("__repr__", [](const pane::AttributedGraph& g) {
        return "Graph(n=" + std::to_string(g.n) + ", d=" + std::to_string(g.d) +
               ", m=" + std::to_string(g.m) + ")";
      });

  m.def(
      "load_graph",
      [](const std::string& edges, const std::string& attrs, bool directed,
         bool strict_ids) {
        pane::LoadOptions opts;
        opts.directed = directed;
        opts.strict_ids = strict_ids;
        return pane::load_graph_files(edges, attrs, opts);
      },
      py::arg("edges"), py::arg("attrs"), py::arg("directed") = true,
      py::arg("strict_ids") = false);

  m.def(
      "save_graph",
      [](const pane::AttributedGraph& g, const std::string& edges,
         const std::string& attrs) {
        std::ofstream es(edges), as(attrs);
        if (!es) throw pane::IoError("cannot open " + edges + " for writing");
        if (!as) throw pane::IoError("cannot open " + attrs + " for writing");
        pane::save_graph(g, es, as);
      },
      py::arg("g"), py::arg("edges"), py::arg("attrs"));

  m.def(
      "synth",
      [](pane::NodeId n, pane::AttrId d, std::uint32_t communities,
         std::uint64_t seed, double avg_degree, double edge_homophily,
         double attr_homophily, std::uint32_t attrs_per_node) {
        pane::SynthConfig cfg;
        cfg.n = n;
        cfg.d = d;
        cfg.communities = communities;
        cfg.seed = seed;
        cfg.avg_degree = avg_degree;
        cfg.edge_homophily = edge_homophily;
        cfg.attr_homophily = attr_homophily;
        cfg.attrs_per_node = attrs_per_node;
        return pane::synth_attributed_graph(cfg);
      },
      py::arg("n") = 1000, py::arg("d") = 64, py::arg("communities") = 8,
      py::arg("seed") = 1, py::arg("avg_degree") = 10.0,
      py::arg("edge_homophily") = 0.9, py::arg("attr_homophily") = 0.9,
      py::arg("attrs_per_node") = 5);

  m.def("derive_iterations", &pane::derive_iterations, py::arg("alpha"),
        py::arg("epsilon"));

  m.def(
      "affinity",
      [](const pane::AttributedGraph& g, double alpha, double epsilon) {
        const auto params = pane::make_walk_params(alpha, epsilon);
        const auto aff = pane::apmi(pane::random_walk_matrix(g),
                                    pane::normalize_attributes(g), params);
        return std::make_tuple(pane::ColMat(aff.f_prime), pane::ColMat(aff.b_prime),
                               aff.t);
      },
      py::arg("g"), py::arg("alpha") = 0.5, py::arg("epsilon") = 0.015,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "embed",
      [](const pane::AttributedGraph& g, int k, double alpha, double epsilon,
         int threads, std::uint64_t seed, int svd_iters, int sweeps) {
        const auto emb = pane::pane(
            g, config_from(k, alpha, epsilon, threads, seed, svd_iters, sweeps));
        return std::make_tuple(emb.x_f, emb.x_b, emb.y);
      },
      py::arg("g"), py::arg("k") = 128, py::arg("alpha") = 0.5,
      py::arg("epsilon") = 0.015, py::arg("threads") = 1, py::arg("seed") = 1,
      py::arg("svd_iters") = 0, py::arg("sweeps") = -1,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "classifier_features",
      [](const pane::ColMat& x_f, const pane::ColMat& x_b) {
        pane::EmbeddingSet emb;
        emb.x_f = x_f;
        emb.x_b = x_b;
        emb.y = pane::ColMat::Zero(0, x_f.cols());
        return pane::export_classifier_features(emb);
      },
      py::arg("x_f"), py::arg("x_b"));

  m.def(
      "save_embeddings",
      [](const std::string& path, const pane::ColMat& x_f, const pane::ColMat& x_b,
         const pane::ColMat& y, double alpha, double epsilon, std::uint64_t seed) {
        pane::EmbeddingSet emb;
        emb.x_f = x_f;
        emb.x_b = x_b;
        emb.y = y;
        pane::PaneConfig cfg;
        cfg.k = emb.k();
        cfg.alpha = alpha;
        cfg.epsilon = epsilon;
        cfg.seed = seed;
        std::ofstream sink(path, std::ios::binary);
        if (!sink) throw pane::IoError("cannot open " + path + " for writing");
        return pane::save_embeddings(emb, cfg, sink);
      },
      py::arg("path"), py::arg("x_f"), py::arg("x_b"), py::arg("y"),
      py::arg("alpha") = 0.5, py::arg("epsilon") = 0.015, py::arg("seed") = 1);

  m.def(
      "load_embeddings",
      [](const std::string& path) {
        std::ifstream source(path, std::ios::binary);
        if (!source) throw pane::IoError("cannot open " + path);
        auto [emb, meta] = pane::load_embeddings(source);
        py::dict info;
        info["version"] = meta.version;
        info["n"] = meta.n;
        info["d"] = meta.d;
        info["k"] = meta.k;
        info["alpha"] = meta.alpha;
        info["epsilon"] = meta.epsilon;
        info["seed"] = meta.seed;
        return py::make_tuple(emb.x_f, emb.x_b, emb.y, info);
      },
      py::arg("path"));

  m.def(
      "auc",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        return pane::auc(zip_scores(scores, labels));
      },
      py::arg("scores"), py::arg("labels"));

  m.def(
      "average_precision",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        return pane::average_precision(zip_scores(scores, labels));
      },
      py::arg("scores"), py::arg("labels"));
}
