#include "pane/storage.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace pane {

static_assert(std::endian::native == std::endian::little,
              "archive layout assumes a little-endian host");

namespace {

constexpr char kEmbMagic[8] = {'P', 'A', 'N', 'E', 'E', 'M', 'B', '1'};
constexpr char kAffMagic[8] = {'P', 'A', 'N', 'E', 'A', 'F', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& sink, const T& value) {
  sink.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::istream& source, const char* field) {
  T value;
  source.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!source) throw IoError(std::string("archive truncated reading ") + field);
  return value;
}

void put_matrix(std::ostream& sink, const ColMat& m) {
  const RowMat row_major = m;
  sink.write(reinterpret_cast<const char*>(row_major.data()),
             static_cast<std::streamsize>(sizeof(double) * row_major.size()));
}

RowMat take_matrix(std::istream& source, std::uint64_t rows, std::uint64_t cols,
                   const char* field) {
  RowMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  source.read(reinterpret_cast<char*>(m.data()),
              static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!source)
    throw IoError(std::string("payload size mismatch reading ") + field);
  return m;
}

void check_stream(const std::ostream& sink) {
  if (!sink) throw IoError("write to archive sink failed");
}

}  // namespace

std::uint64_t save_embeddings(const EmbeddingSet& emb, const PaneConfig& cfg,
                              std::ostream& sink) {
  const std::uint64_t n = static_cast<std::uint64_t>(emb.x_f.rows());
  const std::uint64_t d = static_cast<std::uint64_t>(emb.y.rows());
  const std::uint32_t k = static_cast<std::uint32_t>(emb.k());
  sink.write(kEmbMagic, sizeof(kEmbMagic));
  put(sink, kVersion);
  put(sink, n);
  put(sink, d);
  put(sink, k);
  put(sink, cfg.alpha);
  put(sink, cfg.epsilon);
  put(sink, cfg.seed);
  put_matrix(sink, emb.x_f);
  put_matrix(sink, emb.x_b);
  put_matrix(sink, emb.y);
  sink.flush();
  check_stream(sink);
  return 56 + sizeof(double) * (2 * n + d) * (k / 2);
}

std::pair<EmbeddingSet, ArchiveMeta> load_embeddings(std::istream& source) {
  char magic[8];
  source.read(magic, sizeof(magic));
  if (!source || std::memcmp(magic, kEmbMagic, sizeof(magic)) != 0)
    throw IoError("bad magic: not an embedding archive");
  ArchiveMeta meta;
  meta.version = take<std::uint32_t>(source, "version");
  if (meta.version != kVersion)
    throw IoError("unsupported archive version " + std::to_string(meta.version));
  meta.n = take<std::uint64_t>(source, "n");
  meta.d = take<std::uint64_t>(source, "d");
  meta.k = take<std::uint32_t>(source, "k");
  meta.alpha = take<double>(source, "alpha");
  meta.epsilon = take<double>(source, "epsilon");
  meta.seed = take<std::uint64_t>(source, "seed");
  if (meta.k == 0 || meta.k % 2 != 0)
    throw IoError("archive k must be positive and even, got " + std::to_string(meta.k));

  EmbeddingSet emb;
  const std::uint64_t half = meta.k / 2;
  emb.x_f = take_matrix(source, meta.n, half, "X_f");
  emb.x_b = take_matrix(source, meta.n, half, "X_b");
  emb.y = take_matrix(source, meta.d, half, "Y");
  if (source.peek() != std::istream::traits_type::eof())
    throw IoError("payload size mismatch: trailing bytes after Y");
  return {std::move(emb), meta};
}

std::uint64_t export_tsv(const EmbeddingSet& emb, std::ostream& sink) {
  const Eigen::Index half = emb.x_f.cols();
  char buf[32];
  auto put_row = [&](const char* tag, const auto& row) {
    sink << '\t' << tag << ':';
    for (Eigen::Index l = 0; l < half; ++l) {
      std::snprintf(buf, sizeof(buf), "%.9g", row(l));
      if (l) sink << ',';
      sink << buf;
    }
  };
  std::uint64_t lines = 0;
  for (Eigen::Index v = 0; v < emb.x_f.rows(); ++v) {
    sink << v;
    put_row("f", emb.x_f.row(v));
    put_row("b", emb.x_b.row(v));
    sink << '\n';
    ++lines;
  }
  for (Eigen::Index r = 0; r < emb.y.rows(); ++r) {
    sink << r;
    put_row("y", emb.y.row(r));
    sink << '\n';
    ++lines;
  }
  sink.flush();
  check_stream(sink);
  return lines;
}

std::uint64_t save_affinity(const AffinityPair& aff, std::ostream& sink) {
  const std::uint64_t n = static_cast<std::uint64_t>(aff.f_prime.rows());
  const std::uint64_t d = static_cast<std::uint64_t>(aff.f_prime.cols());
  sink.write(kAffMagic, sizeof(kAffMagic));
  put(sink, n);
  put(sink, d);
  put(sink, static_cast<std::uint64_t>(aff.t));
  put(sink, aff.alpha);
  sink.write(reinterpret_cast<const char*>(aff.f_prime.data()),
             static_cast<std::streamsize>(sizeof(double) * aff.f_prime.size()));
  sink.write(reinterpret_cast<const char*>(aff.b_prime.data()),
             static_cast<std::streamsize>(sizeof(double) * aff.b_prime.size()));
  sink.flush();
  check_stream(sink);
  return 40 + sizeof(double) * 2 * n * d;
}

AffinityPair load_affinity(std::istream& source) {
  char magic[8];
  source.read(magic, sizeof(magic));
  if (!source || std::memcmp(magic, kAffMagic, sizeof(magic)) != 0)
    throw IoError("bad magic: not an affinity archive");
  const auto n = take<std::uint64_t>(source, "n");
  const auto d = take<std::uint64_t>(source, "d");
  const auto t = take<std::uint64_t>(source, "t");
  const auto alpha = take<double>(source, "alpha");

  AffinityPair aff;
  aff.t = static_cast<int>(t);
  aff.alpha = alpha;
  aff.f_prime = take_matrix(source, n, d, "F'");
  aff.b_prime = take_matrix(source, n, d, "B'");
  if (source.peek() != std::istream::traits_type::eof())
    throw IoError("payload size mismatch: trailing bytes after B'");
  return aff;
}

}  // namespace pane
