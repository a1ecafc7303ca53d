#pragma once

#include "pane/affinity.hpp"
#include "pane/factorization.hpp"
#include "pane/pipeline.hpp"

#include <iosfwd>

namespace pane {

// Binary archive, little-endian:
//   magic "PANEEMB1" | version u32 | n u64 | d u64 | k u32 | alpha f64 |
//   epsilon f64 | seed u64                                  (56-byte header)
// then row-major f64 X_f (n x k/2), X_b (n x k/2), Y (d x k/2).
struct ArchiveMeta {
  std::uint32_t version = 1;
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  std::uint32_t k = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

std::uint64_t save_embeddings(const EmbeddingSet& emb, const PaneConfig& cfg,
                              std::ostream& sink);
std::pair<EmbeddingSet, ArchiveMeta> load_embeddings(std::istream& source);

// "node_id\tf:<k/2 floats>\tb:<k/2 floats>" per node, then
// "attr_id\ty:<k/2 floats>" per attribute; comma-separated, 9 significant digits.
std::uint64_t export_tsv(const EmbeddingSet& emb, std::ostream& sink);

// Affinity dump: magic "PANEAFF1" | n u64 | d u64 | t u64 | alpha f64,
// then row-major f64 F' and B'.
std::uint64_t save_affinity(const AffinityPair& aff, std::ostream& sink);
AffinityPair load_affinity(std::istream& source);

}  // namespace pane
