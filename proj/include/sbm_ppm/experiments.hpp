#pragma once

#include <algorithm>
#include <chrono>
#include <concepts>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clustering.hpp"
#include "eval.hpp"
#include "graph_io.hpp"
#include "init.hpp"
#include "parallel.hpp"
#include "ppm.hpp"
#include "rng.hpp"
#include "sbm.hpp"

namespace sbm_ppm {

enum class InitKind { Spectral, Random };

inline std::string_view to_string(InitKind k) { return k == InitKind::Spectral ? "spectral" : "random"; }

struct Range {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  // Inclusive grid min, min + step, ..., <= max (with a small slack for
  // accumulated rounding in max).
  std::vector<double> values() const {
    if (!(step > 0.0)) throw ParameterError("Range: step must be positive");
    if (max < min) throw ParameterError("Range: max < min");
    const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = min + static_cast<double>(i) * step;
    return v;
  }
};

struct TrialOptions {
  InitKind init = InitKind::Spectral;
  Stopping stopping = Stopping::CycleDetect;
  std::optional<int> max_iterations;
  bool self_loops = true;
  std::function<void(const Clustering&)> on_iterate;  // must be thread-safe for grids
};

struct GridSpec {
  std::size_t n = 300;
  int k = 3;
  Range alpha{0.0, 30.0, 2.5};
  Range beta{0.0, 10.0, 2.0};
  int trials = 20;
  std::uint64_t seed = 1;
  TrialOptions trial;

  void validate() const {
    if (trials < 1) throw ParameterError("GridSpec: trials must be >= 1");
    if (k < 2 || n % static_cast<std::size_t>(k) != 0) throw ParameterError("GridSpec: K must divide n");
    if (alpha.min < 0.0 || beta.min < 0.0) throw ParameterError("GridSpec: rates must be non-negative");
    (void)alpha.values();
    (void)beta.values();
  }
};

struct GridCellRecord {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t alpha_index = 0;
  std::size_t beta_index = 0;
  int success_count = 0;
  int trials = 0;
  double mean_iterations = 0.0;
  double mean_wall_time = 0.0;
  double threshold = 0.0;  // sqrt(alpha) - sqrt(beta) - sqrt(K); > 0 is the recoverable side
  std::string error;
};

struct TrialOutcome {
  bool exact = false;
  int iterations = 0;
  double seconds = 0.0;
  std::int64_t mismatches = 0;
};

// plant -> sample -> initialise -> run, all streams derived from `seed`.
inline TrialOutcome run_sbm_trial(std::size_t n, int k, double p, double q, std::uint64_t seed,
                                  const TrialOptions& opt) {
  const auto params = SbmParams::with_probabilities(n, k, p, q);
  const auto truth = planted_truth(n, k, derive_seed(seed, {0}));
  const auto graph = sample_graph(params, truth, derive_seed(seed, {1}), opt.self_loops);
  const auto pi = balanced_capacities(n, k);

  const auto start = std::chrono::steady_clock::now();
  const Clustering h0 = opt.init == InitKind::Spectral
                            ? spectral_init(graph, k, pi, derive_seed(seed, {2})).clustering
                            : random_init(n, k, pi, derive_seed(seed, {2}));
  RunConfig cfg;
  cfg.stopping = opt.stopping;
  cfg.max_iterations = opt.max_iterations;
  cfg.on_iterate = opt.on_iterate;
  const auto res = run(graph, h0, pi, cfg, opt.stopping == Stopping::TruthHit ? &truth : nullptr);
  const auto stop = std::chrono::steady_clock::now();

  TrialOutcome out;
  out.mismatches = align(res.final, truth).mismatches;
  out.exact = out.mismatches == 0;
  out.iterations = res.iterations_used;
  out.seconds = std::chrono::duration<double>(stop - start).count();
  return out;
}

inline std::uint64_t cell_trial_seed(std::uint64_t base, std::size_t ai, std::size_t bi, int trial) {
  return derive_seed(base, {ai, bi, static_cast<std::uint64_t>(trial)});
}

// One (alpha, beta) cell. Exceptions become an error row.
inline GridCellRecord run_grid_cell(const GridSpec& spec, std::size_t ai, std::size_t bi) {
  const auto alphas = spec.alpha.values();
  const auto betas = spec.beta.values();
  GridCellRecord rec;
  rec.alpha = alphas.at(ai);
  rec.beta = betas.at(bi);
  rec.alpha_index = ai;
  rec.beta_index = bi;
  rec.trials = spec.trials;
  rec.threshold = std::sqrt(rec.alpha) - std::sqrt(rec.beta) - std::sqrt(static_cast<double>(spec.k));
  try {
    const double p = detail::log_rate(rec.alpha, spec.n);
    const double q = detail::log_rate(rec.beta, spec.n);
    double iters = 0.0, secs = 0.0;
    for (int t = 0; t < spec.trials; ++t) {
      const auto o = run_sbm_trial(spec.n, spec.k, p, q, cell_trial_seed(spec.seed, ai, bi, t), spec.trial);
      rec.success_count += o.exact ? 1 : 0;
      iters += o.iterations;
      secs += o.seconds;
    }
    rec.mean_iterations = iters / spec.trials;
    rec.mean_wall_time = secs / spec.trials;
  } catch (const std::exception& e) {
    rec.success_count = 0;
    rec.error = e.what();
  }
  return rec;
}

// Every cell of the grid in (alpha, beta) row-major order. Cells run in
// parallel; `emit` sees them in order.
template <class Emit>
  requires std::invocable<Emit&, const GridCellRecord&>
void run_phase_grid(const GridSpec& spec, Emit&& emit, unsigned workers = worker_count()) {
  spec.validate();
  const std::size_t na = spec.alpha.values().size();
  const std::size_t nb = spec.beta.values().size();
  auto forward = [&](const GridCellRecord& r) { emit(r); };
  OrderedSink<GridCellRecord, decltype(forward)> sink(na * nb, forward);
  parallel_for(
      na * nb, [&](std::size_t cell) { sink.put(cell, run_grid_cell(spec, cell / nb, cell % nb)); }, workers);
}

inline std::vector<GridCellRecord> run_phase_grid(const GridSpec& spec, unsigned workers = worker_count()) {
  std::vector<GridCellRecord> out;
  run_phase_grid(spec, [&](const GridCellRecord& r) { out.push_back(r); }, workers);
  return out;
}

inline void write_grid_header(std::ostream& os) {
  os << "alpha,beta,success_count,trials,success_rate,mean_iterations,mean_wall_time,threshold,error\n";
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline void write_grid_row(std::ostream& os, const GridCellRecord& r) {
  os << std::setprecision(10) << r.alpha << ',' << r.beta << ',' << r.success_count << ',' << r.trials << ','
     << static_cast<double>(r.success_count) / r.trials << ',' << r.mean_iterations << ',' << r.mean_wall_time
     << ',' << r.threshold << ',' << csv_escape(r.error) << '\n';
}

struct ConvergenceRun {
  int run_id = 0;
  std::vector<double> distances;  // iteration 0 = rebalanced start H^1
  std::optional<int> first_exact;  // first iteration with distance 0
  double seconds = 0.0;
  StopReason reason = StopReason::Budget;
};

struct ConvergenceOptions {
  Stopping stopping = Stopping::CycleDetect;
  std::optional<int> max_iterations;
  bool self_loops = true;
  std::function<void(const Clustering&)> on_iterate;  // called from worker threads
};

// One sampled graph, `repeats` random starts, per-iteration distance to
// the planted truth.
inline std::vector<ConvergenceRun> run_convergence(std::size_t n, int k, double alpha, double beta, int repeats,
                                                   std::uint64_t seed, const ConvergenceOptions& opt = {},
                                                   unsigned workers = worker_count()) {
  if (repeats < 1) throw ParameterError("run_convergence: repeats must be >= 1");
  const auto params = SbmParams::logarithmic(n, k, alpha, beta);
  const auto truth = planted_truth(n, k, derive_seed(seed, {0}));
  const auto graph = sample_graph(params, truth, derive_seed(seed, {1}), opt.self_loops);
  const auto pi = balanced_capacities(n, k);

  std::vector<ConvergenceRun> runs(static_cast<std::size_t>(repeats));
  parallel_for(
      runs.size(),
      [&](std::size_t r) {
        const auto start = std::chrono::steady_clock::now();
        const auto h0 = random_init(n, k, pi, derive_seed(seed, {2, r}));
        RunConfig cfg;
        cfg.stopping = opt.stopping;
        cfg.max_iterations = opt.max_iterations;
        cfg.record_trajectory = true;
        cfg.on_iterate = opt.on_iterate;
        const auto res = run(graph, h0, pi, cfg, &truth);
        const auto stop = std::chrono::steady_clock::now();
        ConvergenceRun& out = runs[r];
        out.run_id = static_cast<int>(r);
        out.distances.push_back(*res.initial_distance);
        out.distances.insert(out.distances.end(), res.trajectory.begin(), res.trajectory.end());
        for (std::size_t t = 0; t < out.distances.size(); ++t)
          if (out.distances[t] == 0.0) {
            out.first_exact = static_cast<int>(t);
            break;
          }
        out.seconds = std::chrono::duration<double>(stop - start).count();
        out.reason = res.converged_reason;
      },
      workers);
  return runs;
}

inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRun>& runs) {
  os << "run_id,iteration,frobenius_distance\n" << std::setprecision(10);
  for (const auto& r : runs)
    for (std::size_t t = 0; t < r.distances.size(); ++t) os << r.run_id << ',' << t << ',' << r.distances[t] << '\n';
}

struct RealRunOptions {
  int repeats = 10;
  int max_iterations = 1000;
  Stopping stopping = Stopping::CycleDetect;
  std::function<void(const Clustering&)> on_iterate;
};

struct RealSummary {
  std::string name;
  std::size_t n = 0;
  int k = 0;
  double best_objective = -std::numeric_limits<double>::infinity();
  int best_run = -1;
  std::optional<std::int64_t> mismatches;
  int iterations = 0;  // of the best run
  double total_seconds = 0.0;
  Clustering best;
};

// Best-of-`repeats` random-start runs with capacities pi (the community
// sizes when labels are known); best means the largest <A H, H>.
inline RealSummary run_real(const RealGraph& g, std::span<const std::int64_t> pi, std::uint64_t seed,
                            const RealRunOptions& opt = {}) {
  if (opt.repeats < 1) throw ParameterError("run_real: repeats must be >= 1");
  const std::size_t n = g.adjacency.n();
  const int k = static_cast<int>(pi.size());
  check_capacities(pi, n);
  RealSummary out;
  out.name = g.name;
  out.n = n;
  out.k = k;
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < opt.repeats; ++r) {
    const auto h0 = random_init(n, k, pi, derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    RunConfig cfg;
    cfg.stopping = opt.stopping;
    cfg.max_iterations = opt.max_iterations;
    cfg.on_iterate = opt.on_iterate;
    auto res = run(g.adjacency, h0, pi, cfg);
    if (res.objective > out.best_objective) {
      out.best_objective = res.objective;
      out.best_run = r;
      out.iterations = res.iterations_used;
      out.best = std::move(res.final);
    }
  }
  out.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (g.labels && g.labels->k() == k) out.mismatches = align(out.best, *g.labels).mismatches;
  return out;
}

inline RealSummary run_real(const RealGraph& g, std::uint64_t seed, const RealRunOptions& opt = {}) {
  return run_real(g, g.capacities(), seed, opt);
}

inline void write_real_csv(std::ostream& os, const RealSummary& s) {
  os << "name,n,k,best_objective,mvs,best_run,iterations,total_wall_time\n" << std::setprecision(10);
  os << csv_escape(s.name) << ',' << s.n << ',' << s.k << ',' << s.best_objective << ',';
  if (s.mismatches) os << *s.mismatches;
  os << ',' << s.best_run << ',' << s.iterations << ',' << s.total_seconds << '\n';
}

}  // namespace sbm_ppm
