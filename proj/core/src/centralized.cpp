#include "bfgsadmm/centralized.hpp"

#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Cholesky>

#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

namespace {

std::optional<CentralizedSolution> quadratic_closed_form(const Problem& problem) {
  if (!problem.regularizer->is_zero()) return std::nullopt;
  const Eigen::Index d = problem.dim();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  for (const auto& cost : problem.costs) {
    const auto* quad = dynamic_cast<const QuadraticCost*>(cost.get());
    if (quad == nullptr) return std::nullopt;
    q += quad->q();
    b += quad->b();
  }
  CentralizedSolution sol;
  sol.x_star = q.llt().solve(-b);
  sol.f_star = problem.global_objective(sol.x_star);
  sol.residual = problem.smooth_gradient(sol.x_star).norm();
  return sol;
}

}  // namespace

CentralizedSolution centralized_reference(const Problem& problem, double tol, std::size_t max_iter) {
  if (auto closed = quadratic_closed_form(problem)) return *closed;

  const Regularizer& g = *problem.regularizer;
  auto composite = [&](const Eigen::VectorXd& v) { return problem.smooth_value(v) + g.value(v); };

  // Start the Lipschitz estimate from the analytic bound when one exists;
  // backtracking corrects it either way.
  double lip = 1.0;
  if (const auto bounds = problem.curvature_bounds(); bounds && bounds->upper > 0.0) {
    lip = bounds->upper * problem.agents();
  }

  const Eigen::Index d = problem.dim();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd y = x;
  double momentum = 1.0;
  double fx = composite(x);

  for (std::size_t it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd grad_y = problem.smooth_gradient(y);
    Eigen::VectorXd x_next;
    for (;;) {
      x_next = g.prox(y - grad_y / lip, 1.0 / lip);
      const Eigen::VectorXd delta = x_next - y;
      const double dn = delta.norm();
      // Gradient-difference test instead of the function-value test: it stays
      // meaningful once steps are too small for f to resolve.
      if (dn == 0.0 || (problem.smooth_gradient(x_next) - grad_y).norm() <= lip * dn * (1.0 + 1e-12)) break;
      lip *= 2.0;
    }
    const double f_next = composite(x_next);
    if (f_next > fx && momentum > 1.0) {
      // Restart the momentum from the last accepted point.
      momentum = 1.0;
      y = x;
      continue;
    }
    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = x_next + ((momentum - 1.0) / momentum_next) * (x_next - x);
    x = x_next;
    fx = f_next;
    momentum = momentum_next;

    const Eigen::VectorXd grad_x = problem.smooth_gradient(x);
    const double residual = lip * (x - g.prox(x - grad_x / lip, 1.0 / lip)).norm();
    if (residual <= tol) {
      CentralizedSolution sol;
      sol.x_star = x;
      sol.f_star = fx;
      sol.iterations = it;
      sol.residual = residual;
      return sol;
    }
  }
  throw Error("centralized reference did not reach gradient-mapping norm " + std::to_string(tol) + " within " +
              std::to_string(max_iter) + " iterations");
}

}  // namespace bfgsadmm
