#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sbm_ppm {

using Label = std::int32_t;

// A partition of n vertices into K labelled groups. Row i of the implied
// n x K 0/1 matrix has its single one in column labels()[i]; capacities()[k]
// is the size of group k (the column sums), computed from the labels so the
// two can never disagree.
class Clustering {
 public:
  Clustering() = default;

  Clustering(std::vector<Label> labels, int k) : labels_(std::move(labels)), k_(k) {
    if (k_ < 1) throw ParameterError("Clustering: K must be positive");
    sizes_.assign(static_cast<std::size_t>(k_), 0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      const Label l = labels_[i];
      if (l < 0 || l >= k_)
        throw StructuralError("Clustering: label " + std::to_string(l) + " at vertex " +
                              std::to_string(i) + " outside [0, " + std::to_string(k_) + ")");
      ++sizes_[static_cast<std::size_t>(l)];
    }
  }

  std::size_t n() const noexcept { return labels_.size(); }
  int k() const noexcept { return k_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  Label operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<std::int64_t>& capacities() const noexcept { return sizes_; }

  bool has_capacities(std::span<const std::int64_t> pi) const noexcept {
    return pi.size() == sizes_.size() && std::equal(pi.begin(), pi.end(), sizes_.begin());
  }

  // Members of each group in increasing vertex order.
  std::vector<std::vector<std::size_t>> groups() const {
    std::vector<std::vector<std::size_t>> g(static_cast<std::size_t>(k_));
    for (std::size_t k = 0; k < g.size(); ++k) g[k].reserve(static_cast<std::size_t>(sizes_[k]));
    for (std::size_t i = 0; i < labels_.size(); ++i)
      g[static_cast<std::size_t>(labels_[i])].push_back(i);
    return g;
  }

  // Squared Frobenius distance between the two 0/1 matrices, without any
  // relabelling: 2 per differing row.
  friend std::int64_t squared_distance(const Clustering& a, const Clustering& b) {
    if (a.n() != b.n()) throw ParameterError("squared_distance: size mismatch");
    std::int64_t d = 0;
    for (std::size_t i = 0; i < a.n(); ++i) d += (a.labels_[i] != b.labels_[i]) ? 2 : 0;
    return d;
  }

  friend bool operator==(const Clustering& a, const Clustering& b) {
    return a.k_ == b.k_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<Label> labels_;
  std::vector<std::int64_t> sizes_;
  int k_ = 0;
};

using Capacities = std::vector<std::int64_t>;

inline Capacities balanced_capacities(std::size_t n, int k) {
  if (k < 1 || n % static_cast<std::size_t>(k) != 0)
    throw ParameterError("balanced_capacities: K must divide n");
  return Capacities(static_cast<std::size_t>(k), static_cast<std::int64_t>(n / k));
}

inline void check_capacities(std::span<const std::int64_t> pi, std::size_t n) {
  if (pi.empty()) throw ParameterError("capacities: need at least one group");
  std::int64_t total = 0;
  for (auto c : pi) {
    if (c < 0) throw ParameterError("capacities: negative entry");
    total += c;
  }
  if (total != static_cast<std::int64_t>(n))
    throw ParameterError("capacities: sum " + std::to_string(total) + " != n = " +
                         std::to_string(n));
}

// Full structural check of a clustering against prescribed capacities:
// every row has exactly one label in [0, K) and column sums equal pi.
inline bool satisfies_structure(const Clustering& h, std::span<const std::int64_t> pi) {
  if (static_cast<std::size_t>(h.k()) != pi.size()) return false;
  std::vector<std::int64_t> counts(pi.size(), 0);
  for (Label l : h.labels()) {
    if (l < 0 || l >= h.k()) return false;
    ++counts[static_cast<std::size_t>(l)];
  }
  return std::equal(counts.begin(), counts.end(), pi.begin());
}

}  // namespace sbm_ppm
