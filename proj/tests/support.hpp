#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "bfgsadmm/graph.hpp"
#include "bfgsadmm/objectives.hpp"
#include "bfgsadmm/synthetic.hpp"

namespace bfgsadmm::support {

/// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::uint64_t seed() { return rng_(); }

  Eigen::VectorXd vector(Eigen::Index d, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    Eigen::VectorXd v(d);
    for (Eigen::Index k = 0; k < d; ++k) v(k) = n(rng_);
    return v;
  }

  Eigen::MatrixXd matrix(Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = n(rng_);
    return m;
  }

  /// SPD with eigenvalues drawn from [lo, hi].
  Eigen::MatrixXd spd(Eigen::Index d, double lo = 0.1, double hi = 10.0) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(matrix(d, d));
    const Eigen::MatrixXd u = qr.householderQ();
    Eigen::VectorXd ev(d);
    for (Eigen::Index k = 0; k < d; ++k) ev(k) = uniform(lo, hi);
    Eigen::MatrixXd out = u * ev.asDiagonal() * u.transpose();
    return 0.5 * (out + out.transpose());
  }

  /// Random connected graph: a random spanning tree plus extra edges.
  Topology graph(int m, double extra_p = 0.3) {
    std::vector<Edge> edges;
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng_);
    std::vector<std::vector<bool>> used(static_cast<std::size_t>(m), std::vector<bool>(static_cast<std::size_t>(m)));
    auto add = [&](int a, int b) {
      const int i = std::min(a, b), j = std::max(a, b);
      if (i == j || used[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) return;
      used[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
      edges.push_back({i, j});
    };
    for (int k = 1; k < m; ++k) add(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(integer(0, k - 1))]);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (uniform(0.0, 1.0) < extra_p) add(i, j);
    std::shuffle(edges.begin(), edges.end(), rng_);
    return Topology(m, std::move(edges));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Central finite-difference gradient with h = 1e-6 (1 + |x|).
inline Eigen::VectorXd numeric_gradient(const SmoothLocalCost& f, const Eigen::VectorXd& x) {
  const double h = 1e-6 * (1.0 + x.norm());
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd p = x, q = x;
    p(k) += h;
    q(k) -= h;
    g(k) = (f.value(p) - f.value(q)) / (2.0 * h);
  }
  return g;
}

/// argmin_t gamma |t| + (t - v)^2 / (2 mu): grid search for a bracket, then
/// bisection on the (monotone) one-sided derivative.
inline double numeric_scalar_prox(double v, double gamma, double mu) {
  auto obj = [&](double t) { return gamma * std::abs(t) + (t - v) * (t - v) / (2.0 * mu); };
  auto right_slope = [&](double t) { return (t >= 0.0 ? gamma : -gamma) + (t - v) / mu; };
  const double span = std::abs(v) + mu * gamma + 1.0;
  const int grid = 2000;
  const double h = 2.0 * span / grid;
  double best = -span;
  for (int k = 0; k <= grid; ++k) {
    const double t = -span + h * k;
    if (obj(t) < obj(best)) best = t;
  }
  double lo = best - h, hi = best + h;
  const double left_slope_at_zero = -gamma - v / mu;
  if (lo < 0.0 && hi > 0.0 && right_slope(0.0) >= 0.0 && left_slope_at_zero <= 0.0) return 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (right_slope(mid) > 0.0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bfgsadmm::support
