#include "bfgsadmm/solver.hpp"

#include <cmath>
#include <string>

#include "bfgsadmm/error.hpp"
#include "parallel.hpp"

namespace bfgsadmm {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kBfgsAdmm:
      return "bfgs_admm";
    case Method::kFirstOrder:
      return "first_order";
    case Method::kExtra:
      return "extra";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "bfgs_admm") return Method::kBfgsAdmm;
  if (name == "first_order") return Method::kFirstOrder;
  if (name == "extra") return Method::kExtra;
  throw Error("unknown method '" + std::string(name) + "' (expected bfgs_admm, first_order or extra)");
}

void SolverConfig::validate(int agents) const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string(name) + " must be a positive finite number");
  };
  positive(mu1, "mu1");
  positive(mu2, "mu2");
  positive(eps, "eps");
  positive(nu, "nu");
  positive(a, "a");
  if (!(curvature_skip_tol >= 0.0)) throw Error("curvature_skip_tol must be non-negative");
  if (designated < 0 || designated >= agents) {
    throw Error("designated agent " + std::to_string(designated) + " is outside [0, " + std::to_string(agents) + ")");
  }
  if (!(tol >= 0.0)) throw Error("tol must be non-negative");
  if (stepsize_override) positive(*stepsize_override, "stepsize override");
  if (threads < 1) throw Error("threads must be at least 1");
}

double theory_epsilon(double m_f, double big_m_f, double margin) {
  if (!(m_f > 0.0) || big_m_f < m_f) throw Error("theory_epsilon needs 0 < m_f <= M_f");
  return 2.0 * (m_f + big_m_f) * (big_m_f / m_f) * (1.0 + margin);
}

namespace {

void check_shapes(const SolverState& state, const Problem& problem, const Topology& topology) {
  const int m = topology.agents();
  if (problem.agents() != m || state.agents() != m) {
    throw Error("agent count mismatch: topology has " + std::to_string(m) + ", problem " +
                std::to_string(problem.agents()) + ", state " + std::to_string(state.agents()));
  }
  const Eigen::Index d = problem.dim();
  if (state.theta.size() != d || state.lambda.size() != d) throw Error("state dimension does not match problem");
}

// sum_{j in N_i} (x^i - x^j), i.e. agent i's block of L_s x.
Eigen::VectorXd disagreement(const std::vector<Eigen::VectorXd>& x, const Topology& topology, int i) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(x[i].size());
  for (int j : topology.neighbors(i)) acc += x[i] - x[j];
  return acc;
}

void require_finite(const Eigen::VectorXd& v, std::size_t iteration, int agent) {
  if (!v.allFinite()) throw DivergenceError(iteration, agent);
}

// Steps 9-12: edge-dual accumulation, fresh gradients, and the designated
// agent's proximal and multiplier updates. `next.x` already holds x_{t+1}.
void dual_round(const SolverState& prev, SolverState& next, const Problem& problem, const Topology& topology,
                const SolverConfig& config) {
  const double half_inv_mu1 = 0.5 / config.mu1;
  detail::for_each_agent(topology.agents(), config.threads, [&](int i) {
    next.phi[i] = prev.phi[i] + half_inv_mu1 * disagreement(next.x, topology, i);
    next.grad[i] = problem.costs[i]->gradient(next.x[i]);
    require_finite(next.grad[i], prev.iteration, i);
  });
  const int l = config.designated;
  next.theta = problem.regularizer->prox(next.x[l] + config.mu2 * prev.lambda, config.mu2);
  next.lambda = prev.lambda + (next.x[l] - next.theta) / config.mu2;
  require_finite(next.theta, prev.iteration, l);
}

// Steps 3-8 with either the assembled quasi-Newton block or a scalar stepsize.
SolverState admm_round(const SolverState& state, const Problem& problem, const Topology& topology,
                       const SolverConfig& config, bool use_curvature) {
  config.validate(topology.agents());
  check_shapes(state, problem, topology);
  const int l = config.designated;
  const double half_inv_mu1 = 0.5 / config.mu1;

  SolverState next = state;
  detail::for_each_agent(topology.agents(), config.threads, [&](int i) {
    Eigen::VectorXd h = state.grad[i] + half_inv_mu1 * disagreement(state.x, topology, i) + state.phi[i];
    if (i == l) h += (state.x[i] - state.theta) / config.mu2 + state.lambda;
    if (use_curvature) {
      next.x[i] = state.x[i] - state.h_inv[i] * h;
    } else {
      const double s = config.stepsize_override.value_or(
          first_order_stepsize(topology.degree(i), i == l, config.mu1, config.mu2, config.eps));
      next.x[i] = state.x[i] - s * h;
    }
    require_finite(next.x[i], state.iteration, i);
  });

  dual_round(state, next, problem, topology, config);

  if (use_curvature) {
    detail::for_each_agent(topology.agents(), config.threads, [&](int i) {
      // s_t = -u_t = x_{t+1} - x_t, d_t = grad f^i(x_{t+1}) - grad f^i(x_t).
      bfgs_inverse_update(next.curvature[i], next.x[i] - state.x[i], next.grad[i] - state.grad[i]);
      next.h_inv[i] = assemble_local_h_inv(next.curvature[i], topology.degree(i), i == l, config.mu1,
                                           config.mu2, config.eps);
    });
  }
  ++next.iteration;
  return next;
}

}  // namespace

SolverState initial_state(const Problem& problem, const Topology& topology, const SolverConfig& config) {
  const int m = topology.agents();
  if (problem.agents() != m) {
    throw Error("problem has " + std::to_string(problem.agents()) + " agents, topology has " + std::to_string(m));
  }
  config.validate(m);
  const Eigen::Index d = problem.dim();
  SolverState s;
  s.x.assign(static_cast<std::size_t>(m), Eigen::VectorXd::Zero(d));
  s.phi = s.x;
  s.theta = Eigen::VectorXd::Zero(d);
  s.lambda = Eigen::VectorXd::Zero(d);
  s.grad.reserve(static_cast<std::size_t>(m));
  s.curvature.reserve(static_cast<std::size_t>(m));
  s.h_inv.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    s.grad.push_back(problem.costs[i]->gradient(s.x[i]));
    s.curvature.push_back(LocalCurvature::scaled_identity(d, config.a, config.nu, config.curvature_skip_tol));
    s.h_inv.push_back(assemble_local_h_inv(s.curvature.back(), topology.degree(i), i == config.designated,
                                           config.mu1, config.mu2, config.eps));
  }
  return s;
}

SolverState bfgs_admm_step(const SolverState& state, const Problem& problem, const Topology& topology,
                           const SolverConfig& config) {
  return admm_round(state, problem, topology, config, true);
}

SolverState first_order_step(const SolverState& state, const Problem& problem, const Topology& topology,
                             const SolverConfig& config) {
  return admm_round(state, problem, topology, config, false);
}

SolverState extra_step(const SolverState& state, const Problem& problem, const Topology& topology,
                       const SolverConfig& config) {
  if (!problem.regularizer->is_zero()) {
    throw Error("the EXTRA recursion requires a zero regularizer");
  }
  config.validate(topology.agents());
  check_shapes(state, problem, topology);
  const double inv_eps = 1.0 / config.eps;
  const double mix = 0.5 / config.mu1 * inv_eps;  // W = I - mix * L_s

  SolverState next = state;
  if (state.iteration == 0) {
    detail::for_each_agent(topology.agents(), config.threads, [&](int i) {
      const Eigen::VectorXd h = state.grad[i] + state.phi[i] + 0.5 / config.mu1 * disagreement(state.x, topology, i);
      next.x[i] = state.x[i] - inv_eps * h;
      require_finite(next.x[i], state.iteration, i);
    });
  } else {
    if (state.x_prev.size() != state.x.size()) throw Error("EXTRA step needs the previous iterate");
    detail::for_each_agent(topology.agents(), config.threads, [&](int i) {
      const Eigen::VectorXd w_now = state.x[i] - mix * disagreement(state.x, topology, i);
      const Eigen::VectorXd w_prev = state.x_prev[i] - mix * disagreement(state.x_prev, topology, i);
      next.x[i] = 2.0 * w_now - w_prev - inv_eps * (state.grad[i] - state.grad_prev[i]);
      require_finite(next.x[i], state.iteration, i);
    });
  }
  // phi, theta and lambda are kept for the diagnostics; with g = 0 the
  // designated pair reduces to theta = x^l, lambda = 0.
  dual_round(state, next, problem, topology, config);
  next.x_prev = state.x;
  next.grad_prev = state.grad;
  ++next.iteration;
  return next;
}

SolverState step(const SolverState& state, const Problem& problem, const Topology& topology,
                 const SolverConfig& config) {
  switch (config.method) {
    case Method::kBfgsAdmm:
      return bfgs_admm_step(state, problem, topology, config);
    case Method::kFirstOrder:
      return first_order_step(state, problem, topology, config);
    case Method::kExtra:
      return extra_step(state, problem, topology, config);
  }
  throw Error("unknown method");
}

}  // namespace bfgsadmm
