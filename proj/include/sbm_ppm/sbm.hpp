#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "clustering.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "sparse_adjacency.hpp"

namespace sbm_ppm {

namespace detail {

// c * ln(n) / n clamped to [0, 1]; accepts c = 0 (used by grid sweeps).
inline double log_rate(double c, std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::clamp(c * std::log(nd) / nd, 0.0, 1.0);
}

}  // namespace detail

// Edge probabilities p = min(1, alpha ln n / n), q = min(1, beta ln n / n).
inline std::pair<double, double> logarithmic_rates(double alpha, double beta, std::size_t n) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ParameterError("logarithmic_rates: alpha and beta must be positive");
  if (n < 2) throw ParameterError("logarithmic_rates: n must be at least 2");
  return {detail::log_rate(alpha, n), detail::log_rate(beta, n)};
}

struct SbmParams {
  std::size_t n = 0;
  int k = 2;
  double alpha = 0.0;
  double beta = 0.0;
  double p = 0.0;
  double q = 0.0;

  // Logarithmic regime; requires K | n.
  static SbmParams logarithmic(std::size_t n, int k, double alpha, double beta) {
    auto [p, q] = logarithmic_rates(alpha, beta, n);
    SbmParams s{n, k, alpha, beta, p, q};
    s.validate();
    return s;
  }

  // Direct probabilities, bypassing the logarithmic parametrisation.
  static SbmParams with_probabilities(std::size_t n, int k, double p, double q) {
    SbmParams s{n, k, 0.0, 0.0, p, q};
    s.validate();
    return s;
  }

  std::size_t community_size() const { return n / static_cast<std::size_t>(k); }

  void validate() const {
    if (n < 1) throw ParameterError("SbmParams: n must be positive");
    if (k < 2) throw ParameterError("SbmParams: K must be at least 2");
    if (n % static_cast<std::size_t>(k) != 0) throw ParameterError("SbmParams: K must divide n");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
      throw ParameterError("SbmParams: probabilities must lie in [0, 1]");
  }
};

// Balanced planted partition. Vertices are laid out in contiguous blocks of
// size n/K; unless `permute` is false a seeded shuffle is then applied.
inline Clustering planted_truth(std::size_t n, int k, std::uint64_t seed, bool permute = true) {
  if (k < 2) throw ParameterError("planted_truth: K must be at least 2");
  if (n == 0 || n % static_cast<std::size_t>(k) != 0)
    throw ParameterError("planted_truth: K must divide n");
  const std::size_t m = n / static_cast<std::size_t>(k);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<Label>(i / m);
  if (permute) {
    Rng rng = make_rng(seed);
    // Fisher-Yates with our own uniform draw so layouts match across standard libraries.
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i + 1));
      std::swap(labels[i], labels[std::min(j, i)]);
    }
  }
  return Clustering(std::move(labels), k);
}

namespace detail {

// Calls emit(t) for each success of T independent Bernoulli(r) trials,
// t in increasing order, using geometric skips (cost proportional to the
// number of successes).
template <class Emit>
void bernoulli_successes(std::uint64_t total, double r, Rng& rng, Emit&& emit) {
  if (total == 0 || r <= 0.0) return;
  if (r >= 1.0) {
    for (std::uint64_t t = 0; t < total; ++t) emit(t);
    return;
  }
  const double log_fail = std::log1p(-r);
  double pos = -1.0;
  while (true) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    pos += 1.0 + std::floor(std::log(u) / log_fail);
    if (pos >= static_cast<double>(total)) return;
    emit(static_cast<std::uint64_t>(pos));
  }
}

}  // namespace detail

// Samples the symmetric adjacency matrix: each unordered pair i <= j is an
// independent Bernoulli(p) within a group and Bernoulli(q) across groups.
// The diagonal is included unless self_loops is false.
inline SparseAdjacency sample_graph(const SbmParams& params, const Clustering& truth,
                                    std::uint64_t seed, bool self_loops = true) {
  params.validate();
  if (truth.n() != params.n || truth.k() != params.k)
    throw ParameterError("sample_graph: truth does not match params (n or K)");
  const auto members = truth.groups();
  const std::size_t k = members.size();
  std::vector<Edge> edges;
  const double m = static_cast<double>(params.community_size());
  const double nd = static_cast<double>(params.n);
  edges.reserve(static_cast<std::size_t>(nd * (m * params.p + (nd - m) * params.q) / 2.0 + nd * params.p + 16));

  // One stream per group pair so the layout of a block never depends on
  // the others.
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      Rng rng = make_rng(derive_seed(seed, {a, b}));
      const auto& ga = members[a];
      const auto& gb = members[b];
      if (a == b) {
        // Pairs (u, v) with u <= v, enumerated row by row.
        const std::uint64_t s = ga.size();
        const std::uint64_t total = s * (s + 1) / 2;
        std::uint64_t u = 0, row_start = 0;
        detail::bernoulli_successes(total, params.p, rng, [&](std::uint64_t t) {
          while (t >= row_start + (s - u)) {
            row_start += s - u;
            ++u;
          }
          const std::uint64_t v = u + (t - row_start);
          if (u == v && !self_loops) return;
          edges.emplace_back(ga[u], ga[v]);
        });
      } else {
        const std::uint64_t sb = gb.size();
        detail::bernoulli_successes(ga.size() * sb, params.q, rng, [&](std::uint64_t t) {
          edges.emplace_back(ga[t / sb], gb[t % sb]);
        });
      }
    }
  }
  return SparseAdjacency::from_edges(params.n, edges);
}

}  // namespace sbm_ppm
