#include "bfgsadmm/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

double softplus(double z) {
  if (z > 30.0) return z + std::exp(-z);
  if (z < -30.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// LogisticCost

LogisticCost::LogisticCost(std::vector<LabeledSample> samples, double scale, double ridge)
    : scale_(scale), ridge_(ridge) {
  if (samples.empty()) throw Error("logistic cost needs at least one sample");
  if (!(scale > 0.0) || !(ridge >= 0.0)) throw Error("logistic cost needs scale > 0 and ridge >= 0");
  const Eigen::Index d = samples.front().features.size();
  features_.resize(static_cast<Eigen::Index>(samples.size()), d);
  labels_.resize(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto& s = samples[j];
    if (s.features.size() != d) {
      throw Error("logistic cost: sample " + std::to_string(j) + " has dimension " +
                  std::to_string(s.features.size()) + ", expected " + std::to_string(d));
    }
    if (s.label != 0 && s.label != 1) throw Error("logistic cost: labels must be 0 or 1");
    features_.row(static_cast<Eigen::Index>(j)) = s.features.transpose();
    labels_(static_cast<Eigen::Index>(j)) = s.label;
  }
}

double LogisticCost::value(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd z = features_ * x;
  double total = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    total += softplus(-z(j)) + (1.0 - labels_(j)) * z(j);
  }
  return scale_ * total / static_cast<double>(z.size()) + 0.5 * ridge_ * x.squaredNorm();
}

Eigen::VectorXd LogisticCost::gradient(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd z = features_ * x;
  Eigen::VectorXd r(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) r(j) = sigmoid(z(j)) - labels_(j);
  Eigen::VectorXd g = features_.transpose() * r;
  g *= scale_ / static_cast<double>(z.size());
  if (ridge_ != 0.0) g += ridge_ * x;
  return g;
}

std::optional<CurvatureBounds> LogisticCost::curvature_bounds() const {
  const Eigen::MatrixXd gram = features_.transpose() * features_ / static_cast<double>(features_.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return CurvatureBounds{ridge_, 0.25 * scale_ * eig.eigenvalues().maxCoeff() + ridge_};
}

// ---------------------------------------------------------------------------
// QuadraticCost

QuadraticCost::QuadraticCost(Eigen::MatrixXd q, Eigen::VectorXd b) : q_(std::move(q)), b_(std::move(b)) {
  if (q_.rows() != q_.cols() || q_.rows() != b_.size()) {
    throw Error("quadratic cost: Q must be square and match b");
  }
  if (!q_.allFinite() || !b_.allFinite()) throw Error("quadratic cost: non-finite data");
  if ((q_ - q_.transpose()).norm() > 1e-12 * (1.0 + q_.norm())) {
    throw Error("quadratic cost: Q is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q_, Eigen::EigenvaluesOnly);
  bounds_ = {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
  if (!(bounds_.lower > 0.0)) throw Error("quadratic cost: Q is not positive definite");
}

double QuadraticCost::value(const Eigen::VectorXd& x) const { return 0.5 * x.dot(q_ * x) + b_.dot(x); }

Eigen::VectorXd QuadraticCost::gradient(const Eigen::VectorXd& x) const { return q_ * x + b_; }

// ---------------------------------------------------------------------------
// Regularizers

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double threshold) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k)) - threshold;
    out(k) = mag > 0.0 ? std::copysign(mag, v(k)) : 0.0;
  }
  return out;
}

double l1_subgradient_residual(const Eigen::VectorXd& theta, const Eigen::VectorXd& lambda, double gamma) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    const double dist = theta(k) != 0.0 ? std::abs(lambda(k) - std::copysign(gamma, theta(k)))
                                        : std::max(std::abs(lambda(k)) - gamma, 0.0);
    worst = std::max(worst, dist);
  }
  return worst;
}

L1Regularizer::L1Regularizer(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0)) throw Error("l1 weight must be non-negative");
}

double L1Regularizer::value(const Eigen::VectorXd& theta) const { return gamma_ * theta.lpNorm<1>(); }

Eigen::VectorXd L1Regularizer::prox(const Eigen::VectorXd& v, double mu) const {
  return soft_threshold(v, mu * gamma_);
}

double L1Regularizer::subgradient_residual(const Eigen::VectorXd& theta, const Eigen::VectorXd& lambda) const {
  return l1_subgradient_residual(theta, lambda, gamma_);
}

double ZeroRegularizer::subgradient_residual(const Eigen::VectorXd&, const Eigen::VectorXd& lambda) const {
  return lambda.size() == 0 ? 0.0 : lambda.lpNorm<Eigen::Infinity>();
}

std::shared_ptr<const LogisticCost> logistic_cost(std::vector<LabeledSample> samples, double scale, double ridge) {
  return std::make_shared<const LogisticCost>(std::move(samples), scale, ridge);
}

std::shared_ptr<const QuadraticCost> quadratic_cost(Eigen::MatrixXd q, Eigen::VectorXd b) {
  return std::make_shared<const QuadraticCost>(std::move(q), std::move(b));
}

std::shared_ptr<const L1Regularizer> l1_regularizer(double gamma) {
  return std::make_shared<const L1Regularizer>(gamma);
}

std::shared_ptr<const ZeroRegularizer> zero_regularizer() { return std::make_shared<const ZeroRegularizer>(); }

// ---------------------------------------------------------------------------
// Problem

Problem::Problem(std::vector<std::shared_ptr<const SmoothLocalCost>> c, std::shared_ptr<const Regularizer> r)
    : costs(std::move(c)), regularizer(std::move(r)) {
  if (costs.empty()) throw Error("problem needs at least one agent cost");
  if (!regularizer) regularizer = zero_regularizer();
  const Eigen::Index d = costs.front()->dim();
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!costs[i]) throw Error("problem: agent " + std::to_string(i) + " has no cost");
    if (costs[i]->dim() != d) {
      throw Error("problem: agent " + std::to_string(i) + " has dimension " + std::to_string(costs[i]->dim()) +
                  ", expected " + std::to_string(d));
    }
  }
}

double Problem::smooth_value(const Eigen::VectorXd& x) const {
  double total = 0.0;
  for (const auto& c : costs) total += c->value(x);
  return total;
}

double Problem::global_objective(const Eigen::VectorXd& x) const {
  return smooth_value(x) + regularizer->value(x);
}

Eigen::VectorXd Problem::smooth_gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  for (const auto& c : costs) g += c->gradient(x);
  return g;
}

std::optional<CurvatureBounds> Problem::curvature_bounds() const {
  CurvatureBounds out{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& c : costs) {
    const auto b = c->curvature_bounds();
    if (!b) return std::nullopt;
    out.lower = std::min(out.lower, b->lower);
    out.upper = std::max(out.upper, b->upper);
  }
  return out;
}

}  // namespace bfgsadmm
