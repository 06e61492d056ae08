#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clustering.hpp"
#include "errors.hpp"
#include "sparse_adjacency.hpp"

namespace sbm_ppm {

enum class GraphFormat { EdgeList, MatrixMarket };

struct LoadOptions {
  bool drop_self_loops = true;
  // Communities smaller than this are removed together with their vertices.
  std::int64_t min_community_size = 0;
};

struct RealGraph {
  std::string name;
  SparseAdjacency adjacency;
  std::optional<Clustering> labels;

  // Group sizes of the ground truth (the column sums used by the
  // unbalanced projection).
  Capacities capacities() const {
    if (!labels) throw ParameterError("RealGraph: no labels loaded");
    return labels->capacities();
  }
};

namespace detail {

inline bool is_comment_or_blank(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#' || line[pos] == '%';
}

inline std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

struct RawEdges {
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::int64_t declared_n = -1;
  bool one_based = true;
};

inline RawEdges read_edge_list(std::istream& in, const std::string& path) {
  RawEdges raw;
  std::string line;
  std::size_t lineno = 0;
  std::int64_t min_id = std::numeric_limits<std::int64_t>::max();
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ss(line);
    std::int64_t u = 0, v = 0;
    if (!(ss >> u >> v)) throw ParseError(path, lineno, "expected two vertex ids");
    if (u < 0 || v < 0) throw ParseError(path, lineno, "negative vertex id");
    min_id = std::min({min_id, u, v});
    raw.edges.emplace_back(u, v);
  }
  raw.one_based = raw.edges.empty() || min_id >= 1;
  return raw;
}

inline RawEdges read_matrix_market(std::istream& in, const std::string& path) {
  RawEdges raw;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path, 1, "empty file");
  ++lineno;
  std::string banner, object, layout, field, symmetry;
  {
    std::istringstream ss(line);
    ss >> banner >> object >> layout >> field >> symmetry;
    std::transform(layout.begin(), layout.end(), layout.begin(), ::tolower);
    if (banner != "%%MatrixMarket" || layout != "coordinate")
      throw ParseError(path, lineno, "expected a MatrixMarket coordinate header");
  }
  bool have_size = false;
  std::int64_t declared_nnz = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ss(line);
    if (!have_size) {
      std::int64_t rows = 0, cols = 0;
      if (!(ss >> rows >> cols >> declared_nnz)) throw ParseError(path, lineno, "bad size line");
      if (rows != cols) throw ParseError(path, lineno, "adjacency matrix must be square");
      raw.declared_n = rows;
      have_size = true;
      continue;
    }
    std::int64_t u = 0, v = 0;
    if (!(ss >> u >> v)) throw ParseError(path, lineno, "expected row and column indices");
    if (u < 1 || v < 1 || u > raw.declared_n || v > raw.declared_n)
      throw ParseError(path, lineno, "index out of range");
    raw.edges.emplace_back(u, v);
  }
  if (!have_size) throw ParseError(path, lineno, "missing size line");
  raw.one_based = true;
  return raw;
}

}  // namespace detail

// One integer label per line (0- or 1-based: 1-based when no 0 appears).
// A MatrixMarket array file (banner + size line) is accepted as well.
inline std::vector<std::int64_t> read_labels(const std::string& path) {
  auto in = detail::open_or_throw(path);
  std::string line;
  std::size_t lineno = 0;
  bool matrix_market = false, skipped_size = false;
  std::vector<std::int64_t> labels;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("%%MatrixMarket", 0) == 0) {
      matrix_market = true;
      continue;
    }
    if (detail::is_comment_or_blank(line)) continue;
    if (matrix_market && !skipped_size) {
      skipped_size = true;
      continue;
    }
    std::istringstream ss(line);
    std::int64_t v = 0;
    if (!(ss >> v)) throw ParseError(path, lineno, "expected an integer label");
    if (v < 0) throw ParseError(path, lineno, "negative label");
    labels.push_back(v);
  }
  if (labels.empty()) throw ParseError(path, lineno, "no labels");
  const auto lo = *std::min_element(labels.begin(), labels.end());
  if (lo >= 1)
    for (auto& v : labels) v -= 1;
  return labels;
}

inline RealGraph load_graph(const std::string& path, GraphFormat format,
                            const std::optional<std::string>& labels_path = std::nullopt,
                            const LoadOptions& options = {}) {
  auto in = detail::open_or_throw(path);
  auto raw = format == GraphFormat::MatrixMarket ? detail::read_matrix_market(in, path)
                                                 : detail::read_edge_list(in, path);
  const std::int64_t shift = raw.one_based ? 1 : 0;
  std::int64_t n = raw.declared_n;
  if (n < 0) {
    n = 0;
    for (auto [u, v] : raw.edges) n = std::max({n, u - shift + 1, v - shift + 1});
  }

  std::optional<std::vector<std::int64_t>> labels;
  if (labels_path) {
    labels = read_labels(*labels_path);
    const auto ln = static_cast<std::int64_t>(labels->size());
    if (ln < n || (raw.declared_n >= 0 && ln != n))
      throw ParameterError("load_graph: " + std::to_string(ln) + " labels for a graph with " +
                           std::to_string(n) + " vertices");
    n = ln;  // trailing isolated vertices of an edge list
  }

  std::vector<Edge> edges;
  edges.reserve(raw.edges.size());
  for (auto [u, v] : raw.edges)
    edges.emplace_back(static_cast<std::size_t>(u - shift), static_cast<std::size_t>(v - shift));

  RealGraph g;
  {
    const auto slash = path.find_last_of('/');
    g.name = path.substr(slash == std::string::npos ? 0 : slash + 1);
    const auto dot = g.name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) g.name.resize(dot);
  }
  g.adjacency = SparseAdjacency::from_edges(static_cast<std::size_t>(n), edges, options.drop_self_loops);
  if (!labels) return g;

  // Drop small communities, then compact the surviving label values.
  std::map<std::int64_t, std::int64_t> sizes;
  for (auto v : *labels) ++sizes[v];
  std::map<std::int64_t, Label> relabel;
  for (auto [value, size] : sizes)
    if (size >= options.min_community_size) relabel.emplace(value, static_cast<Label>(relabel.size()));
  if (relabel.size() < 1) throw ParameterError("load_graph: every community was removed");

  std::vector<bool> keep(static_cast<std::size_t>(n));
  std::vector<Label> kept;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    auto it = relabel.find((*labels)[i]);
    keep[i] = it != relabel.end();
    if (keep[i]) kept.push_back(it->second);
  }
  if (kept.size() != keep.size()) g.adjacency = g.adjacency.induced(keep);
  g.labels = Clustering(std::move(kept), static_cast<int>(relabel.size()));
  return g;
}

}  // namespace sbm_ppm
