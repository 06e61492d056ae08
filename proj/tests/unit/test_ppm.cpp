#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sbm_ppm/init.hpp"
#include "sbm_ppm/ppm.hpp"
#include "sbm_ppm/sbm.hpp"

using namespace sbm_ppm;

TEST(Score, ZeroMatrix) {
  const auto h = planted_truth(10, 2, 0);
  const auto c = score(SparseAdjacency::from_edges(10, {}), h);
  for (double v : c.values()) EXPECT_EQ(v, 0.0);
}

TEST(Score, CompleteBlocks) {
  const auto truth = planted_truth(12, 3, 5);
  const auto a = sample_graph(SbmParams::with_probabilities(12, 3, 1.0, 0.0), truth, 1);
  const auto c = score(a, truth);
  for (std::size_t i = 0; i < 12; ++i)
    for (int k = 0; k < 3; ++k) EXPECT_EQ(c(i, k), truth[i] == k ? 4.0 : 0.0);
}

TEST(Score, MatchesDenseProduct) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (rng() % 5 == 0) edges.emplace_back(i, j);
    const auto a = SparseAdjacency::from_edges(n, edges);
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<Label> labels(n);
    for (auto& l : labels) l = static_cast<Label>(rng() % static_cast<unsigned>(k));
    const Clustering h(labels, k);
    const auto c = score(a, h);
    const auto ref = oracle::dense_times_indicator(oracle::dense(a), h);
    for (std::size_t i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) ASSERT_EQ(c(i, j), ref[i][static_cast<std::size_t>(j)]);
  }
  EXPECT_THROW(score(SparseAdjacency::from_edges(3, {}), planted_truth(4, 2, 0)), ParameterError);
}

TEST(TheoremBudget, FrozenValues) {
  EXPECT_EQ(theorem_budget(300), 13);
  EXPECT_EQ(theorem_budget(6000), 16);
  EXPECT_EQ(theorem_budget(16), 11);
  EXPECT_EQ(theorem_budget(1000000), 19);
  EXPECT_THROW(theorem_budget(15), ParameterError);
}

TEST(TheoremBudget, MonotoneNondecreasing) {
  int prev = theorem_budget(16);
  for (std::size_t n = 17; n <= 1000000; ++n) {
    const int b = theorem_budget(n);
    ASSERT_GE(b, prev) << n;
    prev = b;
  }
  EXPECT_EQ(default_max_iterations(300), 30);
  EXPECT_EQ(default_max_iterations(8), 30);
}

TEST(PowerStep, DenseBlocksAreFixedPoint) {
  const auto truth = planted_truth(30, 3, 2);
  const auto a = sample_graph(SbmParams::with_probabilities(30, 3, 1.0, 0.0), truth, 3);
  EXPECT_EQ(power_step(a, truth, truth.capacities()), truth);
}

TEST(PowerStep, LabelPermutationEquivariance) {
  const auto params = SbmParams::logarithmic(300, 3, 25.0, 2.0);
  const auto truth = planted_truth(300, 3, 4);
  const auto a = sample_graph(params, truth, 5);
  std::mt19937_64 rng(6);
  const auto pi = balanced_capacities(300, 3);
  for (int t = 0; t < 10; ++t) {
    const auto h = random_init(300, 3, pi, rng());
    const std::vector<int> perm{2, 0, 1};
    std::vector<Label> relabeled(h.labels().begin(), h.labels().end());
    for (auto& l : relabeled) l = perm[static_cast<std::size_t>(l)];
    const Clustering h_perm(relabeled, 3);
    const auto base = power_step(a, h, pi);
    std::vector<Label> base_perm(base.labels().begin(), base.labels().end());
    for (auto& l : base_perm) l = perm[static_cast<std::size_t>(l)];
    // Integer scores tie, so the relabelled output need not be the chosen
    // optimum, but it must belong to T(A H Q).
    const auto c_perm = score(a, h_perm);
    const Clustering candidate(base_perm, 3);
    EXPECT_TRUE(verify_certificate(c_perm, candidate, pi).feasible);
    EXPECT_EQ(inner(c_perm, candidate), inner(c_perm, power_step(a, h_perm, pi)));
  }
}

TEST(Run, StartAtTruthStopsOnCycle) {
  const auto params = SbmParams::logarithmic(300, 3, 25.0, 2.0);
  const auto truth = planted_truth(300, 3, 7);
  const auto a = sample_graph(params, truth, 8);
  RunConfig cfg;
  cfg.record_trajectory = true;
  cfg.verify_certificates = true;
  const auto res = run(a, truth, truth.capacities(), cfg, &truth);
  EXPECT_EQ(res.converged_reason, StopReason::Cycle);
  EXPECT_EQ(res.iterations_used, 5);  // H^6 == H^5 is the first admissible detection
  EXPECT_EQ(res.final, truth);
  EXPECT_EQ(res.trajectory.size(), 5u);
  EXPECT_EQ(*res.initial_distance, 0.0);
}

TEST(Run, DetectsTwoCycle) {
  // Edges {0,2} and {1,3}: every vertex prefers its neighbour's label, so
  // {0,1}|{2,3} flips to {2,3}|{0,1} and back.
  std::vector<Edge> edges{{0, 2}, {1, 3}};
  const auto a = SparseAdjacency::from_edges(4, edges);
  const Clustering h0(std::vector<Label>{0, 0, 1, 1}, 2);
  RunConfig cfg;
  cfg.max_iterations = 100;
  std::vector<Clustering> seen;
  cfg.on_iterate = [&](const Clustering& h) { seen.push_back(h); };
  const auto res = run(a, h0, Capacities{2, 2}, cfg);
  EXPECT_EQ(res.converged_reason, StopReason::Cycle);
  EXPECT_LT(res.iterations_used, 100);
  ASSERT_GE(seen.size(), 3u);
  EXPECT_EQ(seen[1], (Clustering(std::vector<Label>{1, 1, 0, 0}, 2)));
  EXPECT_EQ(seen[2], seen[0]);
}

TEST(Run, RebalancesUnbalancedStart) {
  const auto truth = planted_truth(30, 3, 9);
  const auto a = sample_graph(SbmParams::with_probabilities(30, 3, 0.9, 0.05), truth, 10);
  const Clustering h0(std::vector<Label>(30, 0), 3);
  RunConfig cfg;
  cfg.stopping = Stopping::FixedBudget;
  cfg.max_iterations = 4;
  int calls = 0;
  cfg.on_iterate = [&](const Clustering& h) {
    ++calls;
    EXPECT_TRUE(satisfies_structure(h, Capacities{10, 10, 10}));
  };
  const auto res = run(a, h0, Capacities{10, 10, 10}, cfg);
  EXPECT_EQ(res.iterations_used, 4);
  EXPECT_EQ(res.converged_reason, StopReason::Budget);
  EXPECT_EQ(calls, 5);
}

TEST(Run, DeterministicAndTruthHit) {
  const auto params = SbmParams::logarithmic(600, 3, 25.0, 2.0);
  const auto truth = planted_truth(600, 3, 11);
  const auto a = sample_graph(params, truth, 12);
  const auto pi = balanced_capacities(600, 3);
  const auto h0 = random_init(600, 3, pi, 13);
  RunConfig cfg;
  cfg.stopping = Stopping::TruthHit;
  cfg.record_trajectory = true;
  const auto r1 = run(a, h0, pi, cfg, &truth);
  const auto r2 = run(a, h0, pi, cfg, &truth);
  EXPECT_EQ(r1.final, r2.final);
  EXPECT_EQ(r1.trajectory, r2.trajectory);
  EXPECT_EQ(r1.converged_reason, StopReason::TruthHit);
  EXPECT_EQ(r1.trajectory.back(), 0.0);
  EXPECT_THROW(run(a, h0, pi, cfg, nullptr), ParameterError);
}

TEST(Run, ConfigValidation) {
  const auto a = SparseAdjacency::from_edges(4, {});
  const Clustering h(std::vector<Label>{0, 0, 1, 1}, 2);
  RunConfig cfg;
  cfg.cycle_window = 0;
  EXPECT_THROW(run(a, h, Capacities{2, 2}, cfg), ParameterError);
  cfg = {};
  cfg.max_iterations = 0;
  EXPECT_THROW(run(a, h, Capacities{2, 2}, cfg), ParameterError);
  EXPECT_THROW(run(a, h, Capacities{1, 1, 2}, RunConfig{}), ParameterError);
}
