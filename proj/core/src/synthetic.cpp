#include "bfgsadmm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/QR>

#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
  return m;
}

}  // namespace

Eigen::MatrixXd random_spd(Eigen::Index dim, double condition, std::uint64_t seed) {
  if (dim < 1 || !(condition >= 1.0)) throw Error("random_spd needs dim >= 1 and condition >= 1");
  std::mt19937_64 rng(seed);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(dim, dim, rng));
  const Eigen::MatrixXd u = qr.householderQ();
  Eigen::VectorXd spectrum(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double frac = dim == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(dim - 1);
    spectrum(k) = std::pow(condition, frac);
  }
  Eigen::MatrixXd q = u * spectrum.asDiagonal() * u.transpose();
  return 0.5 * (q + q.transpose());
}

std::vector<QuadraticAgentData> random_quadratic_agents(int agents, Eigen::Index dim, double condition,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<QuadraticAgentData> out;
  out.reserve(static_cast<std::size_t>(agents));
  for (int i = 0; i < agents; ++i) {
    QuadraticAgentData a;
    a.q = random_spd(dim, condition, rng());
    a.b.resize(dim);
    for (Eigen::Index k = 0; k < dim; ++k) a.b(k) = normal(rng);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<LabeledSample> random_logistic_samples(std::size_t count, Eigen::Index dim, std::uint64_t seed,
                                                   double signal) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd truth(dim);
  for (Eigen::Index k = 0; k < dim; ++k) truth(k) = signal * normal(rng);
  std::vector<LabeledSample> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    LabeledSample s;
    s.features.resize(dim);
    for (Eigen::Index k = 0; k < dim; ++k) s.features(k) = normal(rng);
    s.label = unit(rng) < sigmoid(s.features.dot(truth)) ? 1 : 0;
    out.push_back(std::move(s));
  }
  return out;
}

Dataset skin_style_dataset(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Skin-coloured pixels cluster around a warm tone; the rest are spread over
  // the whole cube, so the classes overlap and the logistic fit stays bounded.
  const double centre[3] = {0.45, 0.55, 0.80};
  const double spread[3] = {0.12, 0.10, 0.10};
  auto quantize = [](double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; };

  Dataset ds;
  ds.dim = 3;
  ds.samples.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    SparseSample s;
    const bool skin = unit(rng) < 0.25;
    for (int k = 0; k < 3; ++k) {
      const double v = skin ? centre[k] + spread[k] * normal(rng) : unit(rng);
      const double q = quantize(v);
      if (q != 0.0) s.features.emplace_back(k, q);
    }
    s.label = skin ? 0 : 1;  // 0 = skin, 1 = non-skin
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

Problem logistic_problem(const std::vector<std::vector<LabeledSample>>& parts, double gamma, double ridge) {
  const double scale = 1.0 / static_cast<double>(parts.size());
  std::vector<std::shared_ptr<const SmoothLocalCost>> costs;
  costs.reserve(parts.size());
  for (const auto& samples : parts) costs.push_back(logistic_cost(samples, scale, ridge));
  std::shared_ptr<const Regularizer> reg;
  if (gamma > 0.0) {
    reg = l1_regularizer(gamma);
  } else {
    reg = zero_regularizer();
  }
  return Problem(std::move(costs), std::move(reg));
}

Problem quadratic_problem(const std::vector<QuadraticAgentData>& agents, double gamma) {
  std::vector<std::shared_ptr<const SmoothLocalCost>> costs;
  costs.reserve(agents.size());
  for (const auto& a : agents) costs.push_back(quadratic_cost(a.q, a.b));
  std::shared_ptr<const Regularizer> reg;
  if (gamma > 0.0) {
    reg = l1_regularizer(gamma);
  } else {
    reg = zero_regularizer();
  }
  return Problem(std::move(costs), std::move(reg));
}

}  // namespace bfgsadmm
