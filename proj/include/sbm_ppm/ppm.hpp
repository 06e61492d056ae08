#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "assign.hpp"
#include "clustering.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "score_matrix.hpp"
#include "sparse_adjacency.hpp"

namespace sbm_ppm {

// C = A H: C[i][k] counts the neighbours of i carrying label k. One pass
// over the nonzeros; entries are exact integers.
inline ScoreMatrix score(const SparseAdjacency& a, const Clustering& h) {
  if (a.n() != h.n()) throw ParameterError("score: adjacency and clustering differ in n");
  ScoreMatrix c(h.n(), h.k());
  const auto labels = h.labels();
  for (std::size_t i = 0; i < a.n(); ++i) {
    auto row = c.row(i);
    for (std::size_t j : a.row(i)) row[static_cast<std::size_t>(labels[j])] += 1.0;
  }
  return c;
}

// Projection used inside the iteration: the K = 2 selection fast path or
// the general min-cost assignment.
inline ProjectionResult project_scores(const ScoreMatrix& c, std::span<const std::int64_t> pi) {
  return c.k() == 2 ? project_k2(c, pi) : project(c, pi);
}

// One projected power step H <- T(A H).
inline Clustering power_step(const SparseAdjacency& a, const Clustering& h,
                             std::span<const std::int64_t> pi) {
  return project_scores(score(a, h), pi).clustering;
}

// ceil(2 ln ln n) + ceil(2 ln n / ln ln n) + 2, defined for n >= 16.
inline int theorem_budget(std::size_t n) {
  if (n < 16) throw ParameterError("theorem_budget: requires n >= 16 (ln ln n > 0)");
  const double ln = std::log(static_cast<double>(n));
  const double lnln = std::log(ln);
  return static_cast<int>(std::ceil(2.0 * lnln) + std::ceil(2.0 * ln / lnln)) + 2;
}

// Default iteration cap: the theorem budget, but never fewer than 30.
inline int default_max_iterations(std::size_t n) {
  constexpr int kFloor = 30;
  return n >= 16 ? std::max(theorem_budget(n), kFloor) : kFloor;
}

enum class Stopping { FixedBudget, CycleDetect, TruthHit };
enum class StopReason { Budget, Cycle, TruthHit };

inline std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Budget: return "budget";
    case StopReason::Cycle: return "cycle";
    case StopReason::TruthHit: return "truth";
  }
  return "?";
}

struct RunConfig {
  std::optional<int> max_iterations;  // unset: default_max_iterations(n)
  Stopping stopping = Stopping::CycleDetect;
  int cycle_window = 5;
  int cycle_min_iterate = 6;
  double cycle_tolerance = 1e-3;
  bool record_trajectory = false;
  bool verify_certificates = false;
  // Called with every balanced iterate H^1, H^2, ... as it is produced.
  std::function<void(const Clustering&)> on_iterate;

  void validate() const {
    if (max_iterations && *max_iterations < 1) throw ParameterError("RunConfig: max_iterations must be positive");
    if (cycle_window < 1) throw ParameterError("RunConfig: cycle window must be >= 1");
    if (!(cycle_tolerance > 0.0)) throw ParameterError("RunConfig: cycle tolerance must be > 0");
  }
};

struct RunResult {
  Clustering final;
  int iterations_used = 0;
  // Distances of H^2 .. H^{iterations_used + 1} to the truth (when given
  // and recorded); initial_distance is that of the rebalanced start H^1.
  std::vector<double> trajectory;
  std::optional<double> initial_distance;
  StopReason converged_reason = StopReason::Budget;
  double objective = 0.0;  // <A H, H> of `final`
};

// Projected power method. H0 may be any clustering; it is first projected
// onto the capacity constraints, then refined by power steps until the
// stopping rule fires.
//
// Cycle detection follows the rule "some k >= 6 has ||H^k - H^l||_F <= tol
// for an l in [k - 5, k - 1]". On detection the cycle member with the
// largest <A H, H> is returned (latest on ties).
inline RunResult run(const SparseAdjacency& a, const Clustering& h0, std::span<const std::int64_t> pi,
                     const RunConfig& config, const Clustering* truth = nullptr) {
  config.validate();
  if (a.n() != h0.n()) throw ParameterError("run: adjacency and initial clustering differ in n");
  if (static_cast<std::size_t>(h0.k()) != pi.size()) throw ParameterError("run: capacities length != K");
  if (config.stopping == Stopping::TruthHit && truth == nullptr)
    throw ParameterError("run: truth-hit stopping requires a truth clustering");
  const int max_iter = config.max_iterations.value_or(default_max_iterations(a.n()));

  struct Iterate {
    Clustering h;
    double objective = 0.0;
  };
  std::deque<Iterate> window;

  auto distance = [&](const Clustering& h) { return align(h, *truth).frobenius; };
  auto check = [&](const ScoreMatrix& c, const Clustering& h) {
    if (config.verify_certificates && !verify_certificate(c, h, pi).feasible)
      throw std::logic_error("run: projection failed its optimality certificate");
    if (config.on_iterate) config.on_iterate(h);
  };

  RunResult out;
  Clustering current;
  {
    const ScoreMatrix c0 = ScoreMatrix::indicator(h0);
    current = project_scores(c0, pi).clustering;
    check(c0, current);
  }
  if (truth && config.record_trajectory) out.initial_distance = distance(current);

  for (int step = 1; step <= max_iter; ++step) {
    const ScoreMatrix c = score(a, current);
    const double obj = inner(c, current);
    window.push_back({current, obj});
    if (static_cast<int>(window.size()) > config.cycle_window) window.pop_front();

    Clustering next = project_scores(c, pi).clustering;
    check(c, next);
    out.iterations_used = step;
    const int index = step + 1;  // `next` is H^index

    std::optional<double> dist;
    if (truth && (config.record_trajectory || config.stopping == Stopping::TruthHit)) {
      dist = distance(next);
      if (config.record_trajectory) out.trajectory.push_back(*dist);
    }

    if (config.stopping == Stopping::TruthHit && *dist == 0.0) {
      out.final = std::move(next);
      out.converged_reason = StopReason::TruthHit;
      out.objective = inner(score(a, out.final), out.final);
      return out;
    }

    if (config.stopping == Stopping::CycleDetect && index >= config.cycle_min_iterate) {
      const double tol2 = config.cycle_tolerance * config.cycle_tolerance;
      for (std::size_t w = 0; w < window.size(); ++w) {
        if (static_cast<double>(squared_distance(next, window[w].h)) > tol2) continue;
        // next == H^l; the cycle is window[w..end].
        std::size_t best = w;
        for (std::size_t t = w; t < window.size(); ++t)
          if (window[t].objective >= window[best].objective) best = t;
        out.final = window[best].h;
        out.objective = window[best].objective;
        out.converged_reason = StopReason::Cycle;
        return out;
      }
    }
    current = std::move(next);
  }

  out.final = std::move(current);
  out.converged_reason = StopReason::Budget;
  out.objective = inner(score(a, out.final), out.final);
  return out;
}

}  // namespace sbm_ppm
