#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace bfgsadmm {

/// m_f I <= Hessian <= M_f I, when known analytically.
struct CurvatureBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Smooth, convex private cost of one agent.
class SmoothLocalCost {
 public:
  virtual ~SmoothLocalCost() = default;

  virtual Eigen::Index dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;
  virtual std::optional<CurvatureBounds> curvature_bounds() const { return std::nullopt; }
};

/// Proper closed convex regularizer g with its proximal mapping
/// prox_{mu g}(v) = argmin_theta g(theta) + |theta - v|^2 / (2 mu).
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual double value(const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::VectorXd prox(const Eigen::VectorXd& v, double mu) const = 0;
  /// Max-norm distance from lambda to the subdifferential of g at theta.
  virtual double subgradient_residual(const Eigen::VectorXd& theta, const Eigen::VectorXd& lambda) const = 0;
  virtual bool is_zero() const { return false; }
};

/// One labelled sample, features dense, label in {0, 1}.
struct LabeledSample {
  Eigen::VectorXd features;
  int label = 0;
};

/// (scale / n) sum_j [ log(1 + exp(-w_j^T x)) + (1 - y_j) w_j^T x ] + (ridge / 2) |x|^2.
///
/// Per sample this is the cross-entropy of a logistic model with
/// P(y = 1) = sigmoid(w^T x); its gradient is (sigmoid(w^T x) - y) w.
/// `scale` lets a caller weight agents (e.g. 1/m for an averaged objective).
class LogisticCost final : public SmoothLocalCost {
 public:
  LogisticCost(std::vector<LabeledSample> samples, double scale = 1.0, double ridge = 0.0);

  Eigen::Index dim() const override { return features_.cols(); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  /// Lower bound is the ridge term only: logistic loss is not strongly convex.
  std::optional<CurvatureBounds> curvature_bounds() const override;

  Eigen::Index sample_count() const { return features_.rows(); }
  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& labels() const { return labels_; }
  double scale() const { return scale_; }
  double ridge() const { return ridge_; }

 private:
  Eigen::MatrixXd features_;  // n x d, row j = w_j
  Eigen::VectorXd labels_;
  double scale_;
  double ridge_;
};

/// 0.5 x^T Q x + b^T x with Q symmetric positive definite.
class QuadraticCost final : public SmoothLocalCost {
 public:
  QuadraticCost(Eigen::MatrixXd q, Eigen::VectorXd b);

  Eigen::Index dim() const override { return b_.size(); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  std::optional<CurvatureBounds> curvature_bounds() const override { return bounds_; }

  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::VectorXd& b() const { return b_; }

 private:
  Eigen::MatrixXd q_;
  Eigen::VectorXd b_;
  CurvatureBounds bounds_;
};

/// g = gamma |theta|_1.
class L1Regularizer final : public Regularizer {
 public:
  explicit L1Regularizer(double gamma);

  double value(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd prox(const Eigen::VectorXd& v, double mu) const override;
  double subgradient_residual(const Eigen::VectorXd& theta, const Eigen::VectorXd& lambda) const override;
  bool is_zero() const override { return gamma_ == 0.0; }

  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

/// g = 0.
class ZeroRegularizer final : public Regularizer {
 public:
  double value(const Eigen::VectorXd&) const override { return 0.0; }
  Eigen::VectorXd prox(const Eigen::VectorXd& v, double) const override { return v; }
  double subgradient_residual(const Eigen::VectorXd& theta, const Eigen::VectorXd& lambda) const override;
  bool is_zero() const override { return true; }
};

std::shared_ptr<const LogisticCost> logistic_cost(std::vector<LabeledSample> samples, double scale = 1.0,
                                                  double ridge = 0.0);
std::shared_ptr<const QuadraticCost> quadratic_cost(Eigen::MatrixXd q, Eigen::VectorXd b);
std::shared_ptr<const L1Regularizer> l1_regularizer(double gamma);
std::shared_ptr<const ZeroRegularizer> zero_regularizer();

/// Componentwise sign(v) max(|v| - threshold, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double threshold);

/// max_k dist(lambda_k, d(gamma |.|)(theta_k)). Zero iff lambda is a
/// subgradient of gamma |.|_1 at theta.
double l1_subgradient_residual(const Eigen::VectorXd& theta, const Eigen::VectorXd& lambda, double gamma);

/// log(1 + exp(z)) without overflow.
double softplus(double z);
double sigmoid(double z);

/// A composite problem sum_i f^i(x) + g(x) split across agents.
struct Problem {
  std::vector<std::shared_ptr<const SmoothLocalCost>> costs;
  std::shared_ptr<const Regularizer> regularizer;

  Problem() = default;
  Problem(std::vector<std::shared_ptr<const SmoothLocalCost>> costs, std::shared_ptr<const Regularizer> regularizer);

  int agents() const { return static_cast<int>(costs.size()); }
  Eigen::Index dim() const { return costs.empty() ? 0 : costs.front()->dim(); }

  /// sum_i f^i(x) + g(x), every agent's cost evaluated at the same point.
  double global_objective(const Eigen::VectorXd& x) const;
  /// sum_i grad f^i(x).
  Eigen::VectorXd smooth_gradient(const Eigen::VectorXd& x) const;
  double smooth_value(const Eigen::VectorXd& x) const;

  /// Worst-case bounds over agents, if every agent reports them.
  std::optional<CurvatureBounds> curvature_bounds() const;
};

}  // namespace bfgsadmm
