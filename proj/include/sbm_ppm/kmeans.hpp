#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace sbm_ppm {

struct KMeansResult {
  std::vector<int> assignment;
  Eigen::MatrixXd centers;  // k x d
  double inertia = std::numeric_limits<double>::infinity();
};

namespace detail {

// k-means++ seeding: first center uniform, then D^2 sampling.
inline Eigen::MatrixXd kmeanspp_seed(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const auto n = x.rows();
  Eigen::MatrixXd centers(k, x.cols());
  auto first = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
  centers.row(0) = x.row(std::min(first, n - 1));
  Eigen::VectorXd d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = uniform01(rng) * total;
      for (pick = 0; pick < n - 1; ++pick) {
        target -= d2[pick];
        if (target < 0.0) break;
      }
    } else {
      pick = std::min(static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n)), n - 1);
    }
    centers.row(c) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

inline KMeansResult lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centers, int max_iter) {
  const auto n = x.rows();
  const auto k = centers.rows();
  KMeansResult out;
  out.assignment.assign(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    Eigen::VectorXd best_d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index arg = 0;
      const double d = (centers.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&arg);
      best_d[i] = d;
      if (out.assignment[static_cast<std::size_t>(i)] != static_cast<int>(arg)) {
        out.assignment[static_cast<std::size_t>(i)] = static_cast<int>(arg);
        changed = true;
      }
    }
    out.inertia = best_d.sum();
    if (!changed && it > 0) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(out.assignment[static_cast<std::size_t>(i)]) += x.row(i);
      counts[out.assignment[static_cast<std::size_t>(i)]] += 1.0;
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / counts[c];
      } else {
        // Empty cluster: move it onto the worst-served point.
        Eigen::Index far = 0;
        best_d.maxCoeff(&far);
        centers.row(c) = x.row(far);
        best_d[far] = 0.0;
      }
    }
  }
  out.centers = std::move(centers);
  return out;
}

}  // namespace detail

// Lloyd's algorithm from k-means++ seeds; the restart with the smallest
// within-cluster sum of squares wins.
inline KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::uint64_t seed, int restarts = 10,
                           int max_iter = 100) {
  if (k < 1 || x.rows() < k) throw ParameterError("kmeans: need at least k points");
  KMeansResult best;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    auto res = detail::lloyd(x, detail::kmeanspp_seed(x, k, rng), max_iter);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

}  // namespace sbm_ppm
