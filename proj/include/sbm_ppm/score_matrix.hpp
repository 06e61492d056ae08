#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "clustering.hpp"
#include "errors.hpp"

namespace sbm_ppm {

// Dense n x K row-major score matrix (the input C of the projection).
class ScoreMatrix {
 public:
  ScoreMatrix() = default;

  ScoreMatrix(std::size_t n, int k, double fill = 0.0) : n_(n), k_(k) {
    if (n == 0 || k < 1) throw ParameterError("ScoreMatrix: dimensions must be positive");
    values_.assign(n * static_cast<std::size_t>(k), fill);
  }

  ScoreMatrix(std::size_t n, int k, std::vector<double> values) : n_(n), k_(k), values_(std::move(values)) {
    if (n == 0 || k < 1) throw ParameterError("ScoreMatrix: dimensions must be positive");
    if (values_.size() != n * static_cast<std::size_t>(k))
      throw ParameterError("ScoreMatrix: value count does not match n * K");
  }

  // The 0/1 matrix of a clustering.
  static ScoreMatrix indicator(const Clustering& h) {
    ScoreMatrix c(h.n(), h.k());
    for (std::size_t i = 0; i < h.n(); ++i) c(i, h[i]) = 1.0;
    return c;
  }

  std::size_t n() const noexcept { return n_; }
  int k() const noexcept { return k_; }

  double& operator()(std::size_t i, int k) { return values_[i * static_cast<std::size_t>(k_) + static_cast<std::size_t>(k)]; }
  double operator()(std::size_t i, int k) const { return values_[i * static_cast<std::size_t>(k_) + static_cast<std::size_t>(k)]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_));
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(values_).subspan(i * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_));
  }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  // True when every entry is an integer small enough that sums stay exact.
  bool is_integral() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) {
      return std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 0x1.0p40;
    });
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  ScoreMatrix scaled(double t) const {
    ScoreMatrix c = *this;
    for (double& v : c.values_) v *= t;
    return c;
  }

  // Column-permuted copy: result column perm[k] holds this column k.
  ScoreMatrix permuted_columns(std::span<const int> perm) const {
    ScoreMatrix c(n_, k_);
    for (std::size_t i = 0; i < n_; ++i)
      for (int k = 0; k < k_; ++k) c(i, perm[static_cast<std::size_t>(k)]) = (*this)(i, k);
    return c;
  }

 private:
  std::size_t n_ = 0;
  int k_ = 0;
  std::vector<double> values_;
};

// <C, H>, accumulated in row order.
inline double inner(const ScoreMatrix& c, const Clustering& h) {
  if (c.n() != h.n() || c.k() != h.k()) throw ParameterError("inner: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < h.n(); ++i) s += c(i, h[i]);
  return s;
}

}  // namespace sbm_ppm
