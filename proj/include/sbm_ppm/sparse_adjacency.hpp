#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sbm_ppm {

using Edge = std::pair<std::size_t, std::size_t>;

// Symmetric 0/1 matrix in CSR form. Values are implicit ones; a self-loop
// (i, i) is a single stored entry on the diagonal. Column indices within a
// row are sorted and unique.
class SparseAdjacency {
 public:
  SparseAdjacency() : row_offsets_(1, 0) {}

  // Builds from undirected edges (either orientation). Duplicates collapse;
  // self-loops are kept unless drop_self_loops is set.
  static SparseAdjacency from_edges(std::size_t n, std::span<const Edge> edges,
                                    bool drop_self_loops = false) {
    std::vector<std::size_t> degree(n, 0);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw ParameterError("SparseAdjacency: vertex index out of range");
      if (u == v) {
        if (!drop_self_loops) ++degree[u];
      } else {
        ++degree[u];
        ++degree[v];
      }
    }
    SparseAdjacency a;
    a.n_ = n;
    a.row_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) a.row_offsets_[i + 1] = a.row_offsets_[i] + degree[i];
    a.column_indices_.resize(a.row_offsets_[n]);
    std::vector<std::size_t> fill(a.row_offsets_.begin(), a.row_offsets_.end() - 1);
    for (auto [u, v] : edges) {
      if (u == v) {
        if (!drop_self_loops) a.column_indices_[fill[u]++] = u;
      } else {
        a.column_indices_[fill[u]++] = v;
        a.column_indices_[fill[v]++] = u;
      }
    }
    a.sort_and_dedup();
    return a;
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return column_indices_.size(); }
  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> column_indices() const noexcept { return column_indices_; }

  std::span<const std::size_t> row(std::size_t i) const noexcept {
    return std::span<const std::size_t>(column_indices_)
        .subspan(row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]);
  }

  bool contains(std::size_t i, std::size_t j) const {
    auto r = row(i);
    return std::binary_search(r.begin(), r.end(), j);
  }

  std::size_t self_loops() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_; ++i) c += contains(i, i) ? 1 : 0;
    return c;
  }

  // Number of undirected edges, counting each self-loop once.
  std::size_t undirected_edges() const { return (nnz() + self_loops()) / 2; }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j : row(i))
        if (!contains(j, i)) return false;
    return true;
  }

  // Subgraph induced by the vertices with keep[i] set, renumbered in order.
  SparseAdjacency induced(const std::vector<bool>& keep) const {
    if (keep.size() != n_) throw ParameterError("induced: mask size mismatch");
    std::vector<std::size_t> remap(n_, n_);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n_; ++i)
      if (keep[i]) remap[i] = m++;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!keep[i]) continue;
      for (std::size_t j : row(i))
        if (j >= i && keep[j]) edges.emplace_back(remap[i], remap[j]);
    }
    return from_edges(m, edges);
  }

 private:
  void sort_and_dedup() {
    std::vector<std::size_t> out;
    out.reserve(column_indices_.size());
    std::vector<std::size_t> offsets(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      auto first = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
      auto last = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
      std::sort(first, last);
      auto end = std::unique(first, last);
      out.insert(out.end(), first, end);
      offsets[i + 1] = out.size();
    }
    column_indices_ = std::move(out);
    row_offsets_ = std::move(offsets);
  }

  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> column_indices_;
};

}  // namespace sbm_ppm
