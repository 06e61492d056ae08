#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "assign.hpp"
#include "clustering.hpp"
#include "kmeans.hpp"
#include "rng.hpp"
#include "score_matrix.hpp"
#include "sparse_adjacency.hpp"

namespace sbm_ppm {

// Y = A X for a CSR adjacency and a dense block.
inline Eigen::MatrixXd multiply(const SparseAdjacency& a, const Eigen::MatrixXd& x) {
  if (static_cast<std::size_t>(x.rows()) != a.n()) throw ParameterError("multiply: dimension mismatch");
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j : a.row(i)) y.row(static_cast<Eigen::Index>(i)) += x.row(static_cast<Eigen::Index>(j));
  return y;
}

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(rows, cols);
  // Row-major fill order so G(i, k) depends only on the stream position i * K + k.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) g(i, k) = normal(rng);
  return g;
}

// H0 in T(G) for a standard Gaussian n x K matrix G.
inline Clustering random_init(std::size_t n, int k, std::span<const std::int64_t> pi, std::uint64_t seed) {
  if (n == 0 || k < 1) throw ParameterError("random_init: n and K must be positive");
  Rng rng = make_rng(seed);
  const Eigen::MatrixXd g = gaussian_matrix(static_cast<Eigen::Index>(n), k, rng);
  ScoreMatrix c(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) c(i, j) = g(static_cast<Eigen::Index>(i), j);
  return project(c, pi).clustering;
}

struct EigenOptions {
  double tolerance = 1e-6;  // on ||A V - V L||_F / ||A||_F
  int max_sweeps = 500;
  int oversample = 4;
};

struct EigenResult {
  Eigen::MatrixXd vectors;  // n x K, orthonormal columns
  Eigen::VectorXd values;   // descending
  double residual = 0.0;
  int sweeps = 0;
  bool converged = false;
};

// Top-K (algebraic) eigenpairs of A by block power iteration with
// Householder re-orthonormalisation and a Rayleigh-Ritz step per sweep.
inline EigenResult top_eigenvectors(const SparseAdjacency& a, int k, std::uint64_t seed,
                                    const EigenOptions& opt = {}) {
  const auto n = static_cast<Eigen::Index>(a.n());
  if (k < 1 || k > n) throw ParameterError("top_eigenvectors: need 1 <= K <= n");
  const Eigen::Index block = std::min<Eigen::Index>(n, k + opt.oversample);
  const double a_norm = std::sqrt(static_cast<double>(a.nnz()));

  Rng rng = make_rng(seed);
  Eigen::MatrixXd v = gaussian_matrix(n, block, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  v = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);

  EigenResult out;
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    Eigen::MatrixXd av = multiply(a, v);
    Eigen::MatrixXd t = v.transpose() * av;
    t = 0.5 * (t + t.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    // Ascending from Eigen; reverse for descending order.
    const Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
    const Eigen::VectorXd theta = eig.eigenvalues().reverse();
    Eigen::MatrixXd ritz = v * u;
    Eigen::MatrixXd a_ritz = av * u;

    const Eigen::MatrixXd top = ritz.leftCols(k);
    const Eigen::MatrixXd resid = a_ritz.leftCols(k) - top * theta.head(k).asDiagonal();
    out.residual = a_norm > 0.0 ? resid.norm() / a_norm : 0.0;
    out.sweeps = sweep;
    out.vectors = top;
    out.values = theta.head(k);
    if (out.residual <= opt.tolerance) {
      out.converged = true;
      return out;
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> next(a_ritz);
    v = next.householderQ() * Eigen::MatrixXd::Identity(n, block);
  }
  return out;
}

struct SpectralInitResult {
  Clustering clustering;
  bool fell_back = false;  // eigensolver did not converge; random_init used
  double residual = 0.0;
  int sweeps = 0;
};

// Adjacency eigenvector embedding + k-means, rebalanced onto the capacities
// by projecting the negated squared distances to the cluster centres.
inline SpectralInitResult spectral_init(const SparseAdjacency& a, int k, std::span<const std::int64_t> pi,
                                        std::uint64_t seed, const EigenOptions& opt = {}) {
  const std::size_t n = a.n();
  if (static_cast<std::size_t>(k) != pi.size()) throw ParameterError("spectral_init: capacities length != K");
  check_capacities(pi, n);
  SpectralInitResult out;
  const auto eig = top_eigenvectors(a, k, derive_seed(seed, {1}), opt);
  out.residual = eig.residual;
  out.sweeps = eig.sweeps;
  if (!eig.converged) {
    out.fell_back = true;
    out.clustering = random_init(n, k, pi, derive_seed(seed, {3}));
    return out;
  }
  const auto km = kmeans(eig.vectors, k, derive_seed(seed, {2}));
  ScoreMatrix c(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      c(i, j) = -(eig.vectors.row(static_cast<Eigen::Index>(i)) - km.centers.row(j)).squaredNorm();
  out.clustering = project(c, pi).clustering;
  return out;
}

}  // namespace sbm_ppm
