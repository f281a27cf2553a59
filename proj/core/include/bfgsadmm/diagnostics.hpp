#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "bfgsadmm/graph.hpp"
#include "bfgsadmm/objectives.hpp"
#include "bfgsadmm/solver.hpp"

namespace bfgsadmm {

/// Residuals of the four optimality conditions
///   grad F(x) + E_s^T alpha + C^T lambda = 0,  lambda in dg(theta),
///   E_s x = 0,  x^l = theta.
struct KktResiduals {
  double stationarity = 0.0;    // |grad F(x) + phi + C^T lambda|
  double consensus = 0.0;       // |E_s x| = sqrt(sum over edges |x^i - x^j|^2)
  double link = 0.0;            // |x^l - theta|
  double dual_inclusion = 0.0;  // distance of lambda to dg(theta), max norm

  double max() const;
};

KktResiduals kkt_residuals(const SolverState& state, const Problem& problem, const Topology& topology,
                           int designated);

/// |e_t| / |x_{t+1} - x_t| for consecutive states, with
///   e_t = grad F(x_t) + B_t (x_{t+1} - x_t) - grad F(x_{t+1})
/// and B_t = 0 for the first-order and EXTRA methods. For BFGS-ADMM the
/// action of B_t is recovered from the stored regularized inverse by a small
/// linear solve; this is diagnostic code, the solver never solves.
/// Returns 0 when the step norm is below 1e-14.
double approximation_error(const SolverState& before, const SolverState& after, const Problem& problem,
                           Method method);

/// Edge duals alpha (one d-vector per edge, in topology edge order).
using EdgeDuals = std::vector<Eigen::VectorXd>;

/// Minimum-norm least-squares solution of E_s^T alpha = phi.
EdgeDuals recover_edge_duals(const std::vector<Eigen::VectorXd>& phi, const Topology& topology);

/// Norm of the component of the stacked (alpha, lambda) orthogonal to the
/// column space of [E_s; C].
double dual_column_space_residual(const EdgeDuals& alpha, const Eigen::VectorXd& lambda, const Topology& topology,
                                  int designated);

/// Column-space check for a simplified-path state. alpha is recovered from
/// phi; the returned value combines the least-squares residual of that
/// recovery (nonzero iff phi left the range of E_s^T) with the orthogonal
/// component of (alpha, lambda).
double dual_column_space_check(const SolverState& state, const Topology& topology, int designated);

/// Primal-dual optimum u* = (x*, theta*, alpha*, lambda*) with (alpha*, lambda*)
/// the unique multiplier pair in the column space of [E_s; C].
struct PrimalDualOptimum {
  Eigen::VectorXd x;  // common value of every agent's copy and theta
  EdgeDuals alpha;
  Eigen::VectorXd lambda;
};

PrimalDualOptimum primal_dual_optimum(const Problem& problem, const Topology& topology, int designated,
                                      const Eigen::VectorXd& x_star);

/// |u - u*|^2 in the metric
///   diag(L_u / (2 mu1) + eps I, I / mu2, 2 mu1 I, mu2 I)
/// over u = (x, theta, alpha, lambda); alpha is recovered from phi.
double scaled_distance_squared(const SolverState& state, const PrimalDualOptimum& optimum, const Topology& topology,
                               const SolverConfig& config);

/// exp of the least-squares slope of log(values[t]) against t: the average
/// per-step contraction factor of a geometric sequence.
double fitted_contraction(std::span<const double> values);

/// max_{i,j} |x^i - x^j|.
double max_disagreement(const std::vector<Eigen::VectorXd>& x);

}  // namespace bfgsadmm
