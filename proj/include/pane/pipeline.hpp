#pragma once

#include "pane/ccd.hpp"
#include "pane/graph.hpp"

#include <iosfwd>

namespace pane {

struct PaneConfig {
  int k = 128;
  double alpha = 0.5;
  double epsilon = 0.015;
  int n_b = 1;
  int svd_power_iters = 0;  // 0: use the walk iteration count t
  int ccd_sweeps = -1;      // <0: use t
  std::uint64_t seed = 1;
  bool early_stop = false;
  bool shuffle_partition = false;  // seeded shuffle before chunking blocks
  std::ostream* diagnostics = nullptr;
};

struct PhaseTimings {
  double affinity = 0.0;
  double init = 0.0;
  double ccd = 0.0;
};

// Full pipeline: derive t, affinity (apmi/papmi), greedy or split-merge init,
// CCD refinement (sequential or phase-parallel), per the worker count n_b.
EmbeddingSet pane(const AttributedGraph& g, const PaneConfig& cfg,
                  PhaseTimings* timings = nullptr);

// Per node: X_f row and X_b row independently scaled to unit norm (zero rows
// stay zero), concatenated to a length-k feature row.
RowMat export_classifier_features(const EmbeddingSet& emb);

}  // namespace pane
