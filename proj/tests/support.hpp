#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "krein/spectral_core.hpp"

namespace krein::test {

/// Random smooth field with zero mean and no Nyquist content, built from
/// Fourier modes with decaying amplitudes.
inline RealField random_mean_zero(const GridPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  const int n = g->n();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  const int kmax = n / 4;
  for (int k = 1; k <= kmax; ++k) {
    const double a = nd(rng) / (1.0 + 0.1 * k), b = nd(rng) / (1.0 + 0.1 * k);
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * std::numbers::pi * k * j / n;
      v[j] += a * std::cos(th) + b * std::sin(th);
    }
  }
  return RealField(g, v);
}

inline double rel_sup(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace krein::test
