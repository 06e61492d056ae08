#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "clustering.hpp"
#include "errors.hpp"

namespace sbm_ppm {

// Best label matching between a clustering and a reference.
// permutation[k] is the reference label matched to label k; frobenius is
// min over Q of ||H - H* Q||_F, which for 0/1 clustering matrices is
// sqrt(2 * mismatches).
struct Alignment {
  std::vector<int> permutation;
  std::int64_t mismatches = 0;
  double frobenius = 0.0;
};

// K x K confusion counts: entry [a * K + b] = |{i : h_i = a, truth_i = b}|.
inline std::vector<std::int64_t> confusion_matrix(const Clustering& h, const Clustering& truth) {
  if (h.n() != truth.n() || h.k() != truth.k())
    throw ParameterError("confusion_matrix: clusterings differ in n or K");
  const auto k = static_cast<std::size_t>(h.k());
  std::vector<std::int64_t> m(k * k, 0);
  for (std::size_t i = 0; i < h.n(); ++i)
    ++m[static_cast<std::size_t>(h[i]) * k + static_cast<std::size_t>(truth[i])];
  return m;
}

// Hungarian algorithm (shortest augmenting paths with potentials) on a
// square cost matrix; returns assignment[row] = column minimising total cost.
inline std::vector<int> hungarian_min(const std::vector<std::int64_t>& cost, std::size_t k) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based internal indexing; column 0 is the virtual start.
  std::vector<std::int64_t> u(k + 1, 0), v(k + 1, 0), way(k + 1, 0);
  std::vector<std::size_t> match(k + 1, 0);  // match[col] = row
  for (std::size_t row = 1; row <= k; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<std::int64_t> minv(k + 1, kInf);
    std::vector<char> used(k + 1, 0);
    do {
      used[col0] = 1;
      const std::size_t r0 = match[col0];
      std::int64_t delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[(r0 - 1) * k + (j - 1)] - u[r0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = static_cast<std::int64_t>(col0);
        }
        if (minv[j] < delta) {
          delta = minv[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const auto col1 = static_cast<std::size_t>(way[col0]);
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(k, 0);
  for (std::size_t j = 1; j <= k; ++j) assignment[match[j] - 1] = static_cast<int>(j - 1);
  return assignment;
}

inline Alignment align(const Clustering& h, const Clustering& truth) {
  const auto conf = confusion_matrix(h, truth);
  const auto k = static_cast<std::size_t>(h.k());
  std::vector<std::int64_t> cost(conf.size());
  for (std::size_t t = 0; t < conf.size(); ++t) cost[t] = -conf[t];
  Alignment out;
  out.permutation = hungarian_min(cost, k);
  std::int64_t agree = 0;
  for (std::size_t a = 0; a < k; ++a) agree += conf[a * k + static_cast<std::size_t>(out.permutation[a])];
  out.mismatches = static_cast<std::int64_t>(h.n()) - agree;
  out.frobenius = std::sqrt(2.0 * static_cast<double>(out.mismatches));
  return out;
}

inline bool exact_recovery(const Clustering& h, const Clustering& truth) {
  return align(h, truth).mismatches == 0;
}

}  // namespace sbm_ppm
