#pragma once

#include "pane/factorization.hpp"

#include <iosfwd>

namespace pane {

struct CcdState {
  EmbeddingSet emb;
  ResidualState res;
  int sweep = 0;
  std::uint64_t skipped_coords = 0;
};

CcdState make_ccd_state(InitResult init);

// ||F' - X_f Y^T||_F^2 + ||B' - X_b Y^T||_F^2, recomputed from scratch.
double objective(const AffinityPair& aff, const EmbeddingSet& emb);

// Cheap equivalent via the maintained residuals.
double objective_from_residuals(const CcdState& state);

// One pass over all nodes (coordinates l ascending within a node): exact
// single-coordinate minimizers mu_f, mu_b with O(d) residual row updates.
// Coordinates whose denominator underflows are skipped and counted.
void ccd_sweep_nodes(CcdState& state, const AffinityPair& aff);

// One pass over all attributes: mu_y with O(n) residual column updates.
void ccd_sweep_attrs(CcdState& state, const AffinityPair& aff);

struct RefineOptions {
  int sweeps = 0;
  // Optional stop when the relative objective decrease falls below tol;
  // off by default (fixed sweep count).
  bool early_stop = false;
  double early_stop_tol = 1e-6;
  // When set, one line per sweep: "sweep=<i> objective=<f64> skipped_coords=<int>".
  std::ostream* diagnostics = nullptr;
};

EmbeddingSet refine(CcdState& state, const AffinityPair& aff,
                    const RefineOptions& opts);

// Node phase parallel over node blocks (Y frozen), attribute phase parallel
// over attribute blocks (X frozen), barrier between phases. Updates of
// distinct rows (resp. columns) touch disjoint state, so the result is
// identical to refine() for any valid partition.
EmbeddingSet refine_parallel(CcdState& state, const AffinityPair& aff,
                             const RefineOptions& opts,
                             const Partition& node_partition,
                             const Partition& attr_partition, int workers);

}  // namespace pane
