#include "bfgsadmm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

namespace {

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& blocks, Eigen::Index d) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(blocks.size()), d);
  for (std::size_t k = 0; k < blocks.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = blocks[k].transpose();
  return out;
}

std::vector<Eigen::VectorXd> split_rows(const Eigen::MatrixXd& m, Eigen::Index first, Eigen::Index count) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index k = 0; k < count; ++k) out.emplace_back(m.row(first + k).transpose());
  return out;
}

// [E_s; c_l^T], (n + 1) x m.
Eigen::MatrixXd dual_stack_matrix(const Topology& topology, int designated) {
  const GraphMatrices g = matrices(topology);
  Eigen::MatrixXd x(g.e_s.rows() + 1, g.e_s.cols());
  x.topRows(g.e_s.rows()) = g.e_s;
  x.bottomRows(1).setZero();
  x(g.e_s.rows(), designated) = 1.0;
  return x;
}

}  // namespace

double KktResiduals::max() const { return std::max({stationarity, consensus, link, dual_inclusion}); }

KktResiduals kkt_residuals(const SolverState& state, const Problem& problem, const Topology& topology,
                           int designated) {
  KktResiduals r;
  double stat = 0.0;
  for (int i = 0; i < topology.agents(); ++i) {
    Eigen::VectorXd v = problem.costs[i]->gradient(state.x[i]) + state.phi[i];
    if (i == designated) v += state.lambda;
    stat += v.squaredNorm();
  }
  r.stationarity = std::sqrt(stat);
  double cons = 0.0;
  for (const Edge& e : topology.edges()) cons += (state.x[e.i] - state.x[e.j]).squaredNorm();
  r.consensus = std::sqrt(cons);
  r.link = (state.x[designated] - state.theta).norm();
  r.dual_inclusion = problem.regularizer->subgradient_residual(state.theta, state.lambda);
  return r;
}

double approximation_error(const SolverState& before, const SolverState& after, const Problem& problem,
                           Method method) {
  double err = 0.0;
  double step = 0.0;
  for (int i = 0; i < problem.agents(); ++i) {
    const Eigen::VectorXd s = after.x[i] - before.x[i];
    Eigen::VectorXd e = problem.costs[i]->gradient(before.x[i]) - problem.costs[i]->gradient(after.x[i]);
    if (method == Method::kBfgsAdmm) {
      e += before.curvature[i].regularized_inverse().ldlt().solve(s);
    }
    err += e.squaredNorm();
    step += s.squaredNorm();
  }
  step = std::sqrt(step);
  if (step < 1e-14) return 0.0;
  return std::sqrt(err) / step;
}

EdgeDuals recover_edge_duals(const std::vector<Eigen::VectorXd>& phi, const Topology& topology) {
  const Eigen::Index n = topology.edge_count();
  if (n == 0) return {};
  const Eigen::Index d = phi.front().size();
  const GraphMatrices g = matrices(topology);
  const Eigen::MatrixXd es_t = g.e_s.transpose();
  const Eigen::MatrixXd alpha = es_t.completeOrthogonalDecomposition().solve(stack_rows(phi, d));
  return split_rows(alpha, 0, n);
}

double dual_column_space_residual(const EdgeDuals& alpha, const Eigen::VectorXd& lambda, const Topology& topology,
                                  int designated) {
  const Eigen::Index n = topology.edge_count();
  if (static_cast<Eigen::Index>(alpha.size()) != n) throw Error("edge dual count does not match topology");
  const Eigen::Index d = lambda.size();
  Eigen::MatrixXd w(n + 1, d);
  for (Eigen::Index k = 0; k < n; ++k) w.row(k) = alpha[static_cast<std::size_t>(k)].transpose();
  w.row(n) = lambda.transpose();
  const Eigen::MatrixXd x = dual_stack_matrix(topology, designated);
  const Eigen::MatrixXd coeffs = x.completeOrthogonalDecomposition().solve(w);
  return (w - x * coeffs).norm();
}

double dual_column_space_check(const SolverState& state, const Topology& topology, int designated) {
  const EdgeDuals alpha = recover_edge_duals(state.phi, topology);
  double fit = 0.0;
  if (alpha.empty()) {
    for (const auto& p : state.phi) fit += p.squaredNorm();
  } else {
    const GraphMatrices g = matrices(topology);
    const Eigen::Index d = state.lambda.size();
    const Eigen::MatrixXd back = g.e_s.transpose() * stack_rows(alpha, d);
    fit = (back - stack_rows(state.phi, d)).squaredNorm();
  }
  const double orth = dual_column_space_residual(alpha, state.lambda, topology, designated);
  return std::sqrt(fit + orth * orth);
}

PrimalDualOptimum primal_dual_optimum(const Problem& problem, const Topology& topology, int designated,
                                      const Eigen::VectorXd& x_star) {
  const Eigen::Index d = x_star.size();
  const Eigen::Index n = topology.edge_count();
  Eigen::MatrixXd grads(topology.agents(), d);
  for (int i = 0; i < topology.agents(); ++i) grads.row(i) = problem.costs[i]->gradient(x_star).transpose();
  // [E_s^T  c_l] w = -grad F(x*), minimum norm.
  const Eigen::MatrixXd x_t = dual_stack_matrix(topology, designated).transpose();
  const Eigen::MatrixXd w = x_t.completeOrthogonalDecomposition().solve(-grads);
  PrimalDualOptimum opt;
  opt.x = x_star;
  opt.alpha = split_rows(w, 0, n);
  opt.lambda = w.row(n).transpose();
  return opt;
}

double scaled_distance_squared(const SolverState& state, const PrimalDualOptimum& optimum, const Topology& topology,
                               const SolverConfig& config) {
  std::vector<Eigen::VectorXd> dx;
  dx.reserve(state.x.size());
  for (const auto& xi : state.x) dx.push_back(xi - optimum.x);
  double total = 0.0;
  for (const Edge& e : topology.edges()) total += (dx[e.i] + dx[e.j]).squaredNorm() * (0.5 / config.mu1);
  for (const auto& v : dx) total += config.eps * v.squaredNorm();
  total += (state.theta - optimum.x).squaredNorm() / config.mu2;
  const EdgeDuals alpha = recover_edge_duals(state.phi, topology);
  for (std::size_t k = 0; k < alpha.size(); ++k) total += 2.0 * config.mu1 * (alpha[k] - optimum.alpha[k]).squaredNorm();
  total += config.mu2 * (state.lambda - optimum.lambda).squaredNorm();
  return total;
}

double fitted_contraction(std::span<const double> values) {
  if (values.size() < 2) throw Error("fitted_contraction needs at least two values");
  const double count = static_cast<double>(values.size());
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (!(values[t] > 0.0)) throw Error("fitted_contraction needs positive values");
    mean_t += static_cast<double>(t);
    mean_y += std::log(values[t]);
  }
  mean_t /= count;
  mean_y /= count;
  double cov = 0.0;
  double var = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    const double dt = static_cast<double>(t) - mean_t;
    cov += dt * (std::log(values[t]) - mean_y);
    var += dt * dt;
  }
  return std::exp(cov / var);
}

double max_disagreement(const std::vector<Eigen::VectorXd>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) worst = std::max(worst, (x[i] - x[j]).norm());
  return worst;
}

}  // namespace bfgsadmm
