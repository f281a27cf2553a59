#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bfgsadmm/bfgs.hpp"
#include "bfgsadmm/graph.hpp"
#include "bfgsadmm/objectives.hpp"

namespace bfgsadmm {

enum class Method {
  kBfgsAdmm,    // quasi-Newton primal step
  kFirstOrder,  // B_t = 0: constant diagonal stepsizes
  kExtra,       // two-step recursion equivalent to the first-order variant with stepsize 1/eps
};

std::string_view to_string(Method method);
/// Accepts "bfgs_admm", "first_order" and "extra".
Method parse_method(std::string_view name);

struct SolverConfig {
  // Penalty weights and proximal shift of the approximate Hessian
  // H = B + Delta / mu1 + C^T C / mu2 + eps I.
  double mu1 = 1.0;
  double mu2 = 1.0;
  double eps = 1.0;
  // BFGS: B_0^{-1} = a I, regularization bound nu, and the curvature skip guard.
  double nu = 1e6;
  double a = 1.0;
  double curvature_skip_tol = 1e-12;
  int designated = 0;  // agent holding (theta, lambda)
  std::size_t max_iter = 1000;
  double tol = 1e-8;  // stop when every KKT residual is <= tol
  Method method = Method::kBfgsAdmm;
  // First-order variant only: use this stepsize for every agent instead of
  // 1 / hessian_shift(...). Setting it to 1/eps gives the EXTRA-equivalent run.
  std::optional<double> stepsize_override;
  // Worker threads for the per-agent phases. Results do not depend on it.
  int threads = 1;

  /// Throws bfgsadmm::Error when a field is out of range for `agents` agents.
  void validate(int agents) const;
};

/// Iterate of the simplified (x, phi, theta, lambda) recursion.
///
/// phi^i is agent i's block of E_s^T alpha. The edge duals alpha, the
/// consensus variable z and the second dual half are never stored.
struct SolverState {
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> phi;
  std::vector<Eigen::VectorXd> grad;  // grad f^i(x^i), reused by the next step
  Eigen::VectorXd theta;
  Eigen::VectorXd lambda;
  std::size_t iteration = 0;

  std::vector<LocalCurvature> curvature;
  std::vector<Eigen::MatrixXd> h_inv;  // (H_t^{-1})^{ii}

  // Previous iterate and gradient; only the EXTRA recursion reads them.
  std::vector<Eigen::VectorXd> x_prev;
  std::vector<Eigen::VectorXd> grad_prev;

  int agents() const { return static_cast<int>(x.size()); }
};

/// Zero primal and dual variables, B_0^{-1} = a I for every agent.
SolverState initial_state(const Problem& problem, const Topology& topology, const SolverConfig& config);

/// One synchronous round of the quasi-Newton ADMM. Throws DivergenceError if
/// an iterate becomes non-finite.
SolverState bfgs_admm_step(const SolverState& state, const Problem& problem, const Topology& topology,
                           const SolverConfig& config);

/// Same round with B_t = 0, i.e. x^i <- x^i - s_i h^i.
SolverState first_order_step(const SolverState& state, const Problem& problem, const Topology& topology,
                             const SolverConfig& config);

/// x_{t+1} = 2 W x_t - W x_{t-1} - (grad F(x_t) - grad F(x_{t-1})) / eps with
/// W = I - L_s / (2 mu1 eps); the first step is the first-order step with
/// stepsize 1/eps. Requires a zero regularizer.
SolverState extra_step(const SolverState& state, const Problem& problem, const Topology& topology,
                       const SolverConfig& config);

/// Dispatches on config.method.
SolverState step(const SolverState& state, const Problem& problem, const Topology& topology,
                 const SolverConfig& config);

/// Smallest eps satisfying eps > 2 (m_f + M_f) M_f / m_f, scaled by
/// (1 + margin). Used when the analytic curvature bounds are known.
double theory_epsilon(double m_f, double big_m_f, double margin = 0.01);

}  // namespace bfgsadmm
