#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "clustering.hpp"
#include "errors.hpp"
#include "score_matrix.hpp"

namespace sbm_ppm {

// Column potentials certifying optimality of an assignment: for every
// vertex i in group k and every other group l, w_k - w_l <= c_ik - c_il.
// Canonical form has w[0] == 0.
struct DualPotential {
  std::vector<double> w;
};

struct ProjectionResult {
  Clustering clustering;
  DualPotential dual;
  double objective = 0.0;
};

struct CertificateResult {
  bool feasible = false;
  std::optional<DualPotential> dual;
};

namespace detail {

inline void check_projection_input(const ScoreMatrix& c, std::span<const std::int64_t> pi) {
  if (static_cast<std::size_t>(c.k()) != pi.size())
    throw ParameterError("project: capacities length " + std::to_string(pi.size()) +
                         " != K = " + std::to_string(c.k()));
  check_capacities(pi, c.n());
  if (!c.all_finite()) throw InputError("project: score matrix has non-finite entries");
}

inline double certificate_tolerance(const ScoreMatrix& c) {
  return c.is_integral() ? 0.0 : 1e-9 * std::max(1.0, c.max_abs());
}

// Arc weights of the K-node gain graph: d[k][l] = min over i in group k of
// (c_ik - c_il); +inf when group k is empty.
inline std::vector<double> gain_graph(const ScoreMatrix& c, const Clustering& h) {
  const auto k = static_cast<std::size_t>(c.k());
  std::vector<double> d(k * k, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < c.n(); ++i) {
    const auto g = static_cast<std::size_t>(h[i]);
    const auto r = c.row(i);
    for (std::size_t l = 0; l < k; ++l)
      if (l != g) d[g * k + l] = std::min(d[g * k + l], r[g] - r[l]);
  }
  return d;
}

}  // namespace detail

// Builds the gain graph of `h` under scores `c` and searches for potentials
// with w_k - w_l <= d_kl via Bellman-Ford from a virtual source. Feasible
// exactly when the gain graph has no negative cycle, i.e. when no cyclic
// exchange of vertices between groups improves <C, H>; this is the
// optimality condition for the capacitated assignment.
inline CertificateResult verify_certificate(const ScoreMatrix& c, const Clustering& h,
                                            std::span<const std::int64_t> pi) {
  if (c.n() != h.n() || c.k() != h.k()) throw ParameterError("verify_certificate: dimension mismatch");
  if (!satisfies_structure(h, pi))
    throw StructuralError("verify_certificate: clustering does not match capacities");
  if (!c.all_finite()) throw InputError("verify_certificate: non-finite scores");

  const auto k = static_cast<std::size_t>(c.k());
  const auto d = detail::gain_graph(c, h);
  const double tol = detail::certificate_tolerance(c);

  std::vector<double> dist(k, 0.0);
  for (std::size_t round = 0; round <= k; ++round) {
    bool changed = false;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const double arc = d[a * k + b];
        if (a == b || !std::isfinite(arc)) continue;
        if (dist[a] + arc < dist[b]) {
          dist[b] = dist[a] + arc;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  DualPotential dual;
  dual.w.resize(k);
  for (std::size_t a = 0; a < k; ++a) dual.w[a] = dist[0] - dist[a];

  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const double arc = d[a * k + b];
      if (a == b || !std::isfinite(arc)) continue;
      if (dual.w[a] - dual.w[b] > arc + tol) return {false, std::nullopt};
    }
  return {true, std::move(dual)};
}

inline CertificateResult verify_certificate(const ScoreMatrix& c, const Clustering& h) {
  return verify_certificate(c, h, h.capacities());
}

// Exact maximiser of <C, H> over clusterings with group sizes pi, computed
// as a minimum-cost pi-assignment by successive shortest paths.
//
// Rows are inserted one at a time. The residual network of the current
// optimal partial assignment collapses onto K column nodes: moving a row j
// from group a to group b costs c_ja - c_jb, so the cheapest a -> b arc is
// the minimum of a per-(a, b) heap over group a. Each insertion runs
// Bellman-Ford on those K nodes (the arcs may be negative but the residual
// graph of an optimal flow has no negative cycle) and ends at the cheapest
// column with spare capacity. Total cost O(n K^2 log n + n K^3).
//
// Ties: rows are inserted in increasing index order, heap ties prefer the
// lower row, relaxations require strict improvement and the target column
// is the lowest-index one among equal distances.
inline ProjectionResult project(const ScoreMatrix& c, std::span<const std::int64_t> pi) {
  detail::check_projection_input(c, pi);
  const std::size_t n = c.n();
  const auto k = static_cast<std::size_t>(c.k());

  struct Entry {
    double key;
    std::size_t row;
    std::uint32_t stamp;
    bool operator>(const Entry& o) const { return std::tie(key, row) > std::tie(o.key, o.row); }
  };
  using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

  std::vector<MinHeap> heaps(k * k);
  std::vector<Label> label(n, -1);
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<std::int64_t> count(k, 0);

  auto insert_row = [&](std::size_t j, std::size_t g) {
    label[j] = static_cast<Label>(g);
    ++stamp[j];
    const auto r = c.row(j);
    for (std::size_t l = 0; l < k; ++l)
      if (l != g) heaps[g * k + l].push({r[g] - r[l], j, stamp[j]});
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> arc(k * k);
  std::vector<std::size_t> arc_row(k * k);
  std::vector<double> dist(k);
  std::vector<std::ptrdiff_t> pred(k);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (a == b) continue;
        auto& heap = heaps[a * k + b];
        while (!heap.empty() &&
               (label[heap.top().row] != static_cast<Label>(a) || stamp[heap.top().row] != heap.top().stamp))
          heap.pop();
        arc[a * k + b] = heap.empty() ? kInf : heap.top().key;
        arc_row[a * k + b] = heap.empty() ? 0 : heap.top().row;
      }
    }

    const auto r = c.row(i);
    for (std::size_t a = 0; a < k; ++a) {
      dist[a] = -r[a];
      pred[a] = -1;
    }
    for (std::size_t round = 1; round < k; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (a == b || arc[a * k + b] == kInf) continue;
          const double cand = dist[a] + arc[a * k + b];
          if (cand < dist[b]) {
            dist[b] = cand;
            pred[b] = static_cast<std::ptrdiff_t>(a);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }

    std::size_t target = k;
    for (std::size_t a = 0; a < k; ++a)
      if (count[a] < pi[a] && (target == k || dist[a] < dist[target])) target = a;

    // Walk the predecessor chain back to the entry column. At most K - 1
    // moves in a simple path; the bound guards against rounding cycles.
    std::size_t at = target;
    for (std::size_t steps = 0; pred[at] >= 0; ++steps) {
      if (steps >= k) throw InputError("project: negative cycle in residual graph (ill-conditioned scores)");
      const auto from = static_cast<std::size_t>(pred[at]);
      insert_row(arc_row[from * k + at], at);
      at = from;
    }
    insert_row(i, at);
    ++count[target];
  }

  ProjectionResult out;
  out.clustering = Clustering(std::move(label), static_cast<int>(k));
  out.objective = inner(c, out.clustering);
  auto cert = verify_certificate(c, out.clustering, pi);
  if (cert.dual) {
    out.dual = std::move(*cert.dual);
  } else {
    out.dual.w.assign(k, 0.0);
  }
  return out;
}

// K = 2 closed form: group 0 receives the m0 rows with the largest
// c_i0 - c_i1 (equal differences resolved towards the lower row index),
// found by selection rather than a full sort.
inline ProjectionResult project_k2(const ScoreMatrix& c, std::span<const std::int64_t> pi) {
  if (c.k() != 2) throw ParameterError("project_k2: K must be 2");
  detail::check_projection_input(c, pi);
  const std::size_t n = c.n();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = c(i, 0) - c(i, 1);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto m0 = static_cast<std::size_t>(pi[0]);
  auto before = [&](std::size_t a, std::size_t b) {
    return diff[a] > diff[b] || (diff[a] == diff[b] && a < b);
  };
  if (m0 > 0 && m0 < n)
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m0), order.end(), before);
  std::vector<Label> labels(n, 1);
  for (std::size_t t = 0; t < m0; ++t) labels[order[t]] = 0;

  ProjectionResult out;
  out.clustering = Clustering(std::move(labels), 2);
  out.objective = inner(c, out.clustering);
  auto cert = verify_certificate(c, out.clustering, pi);
  out.dual = cert.dual ? std::move(*cert.dual) : DualPotential{{0.0, 0.0}};
  return out;
}

struct BruteForceResult {
  double objective = 0.0;
  std::vector<Clustering> optima;
  std::size_t enumerated = 0;
};

// Multinomial coefficient n! / prod(pi_k!), saturating at `cap + 1`.
inline double multinomial_count(std::span<const std::int64_t> pi, double cap) {
  double total = 1.0;
  std::int64_t placed = 0;
  for (auto sz : pi) {
    for (std::int64_t t = 1; t <= sz; ++t) {
      ++placed;
      total = total * static_cast<double>(placed) / static_cast<double>(t);
      if (total > cap) return cap + 1.0;
    }
  }
  return std::round(total);
}

// Exhaustive oracle: enumerates every capacity-respecting labelling and
// returns the exact maximum of <C, H> with the full argmax set.
inline BruteForceResult brute_force_project(const ScoreMatrix& c, std::span<const std::int64_t> pi,
                                            double guard = 1e6) {
  detail::check_projection_input(c, pi);
  if (multinomial_count(pi, guard) > guard)
    throw GuardError("brute_force_project: more than " + std::to_string(guard) + " partitions");
  const std::size_t n = c.n();
  const auto k = static_cast<std::size_t>(c.k());
  std::vector<std::int64_t> left(pi.begin(), pi.end());
  std::vector<Label> labels(n, 0);
  BruteForceResult out;
  out.objective = -std::numeric_limits<double>::infinity();

  std::function<void(std::size_t, double)> recurse = [&](std::size_t i, double acc) {
    if (i == n) {
      ++out.enumerated;
      if (acc > out.objective) {
        out.objective = acc;
        out.optima.clear();
      }
      if (acc == out.objective) out.optima.emplace_back(labels, static_cast<int>(k));
      return;
    }
    for (std::size_t g = 0; g < k; ++g) {
      if (left[g] == 0) continue;
      --left[g];
      labels[i] = static_cast<Label>(g);
      recurse(i + 1, acc + c(i, static_cast<int>(g)));
      ++left[g];
    }
  };
  recurse(0, 0.0);
  return out;
}

}  // namespace sbm_ppm
