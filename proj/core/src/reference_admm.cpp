#include "bfgsadmm/reference_admm.hpp"

#include <Eigen/Cholesky>

#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

namespace {

// hat(M) (x) I_d.
Eigen::MatrixXd lift(const Eigen::MatrixXd& m, Eigen::Index d) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows() * d, m.cols() * d);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0.0) out.block(r * d, c * d, d, d) = m(r, c) * Eigen::MatrixXd::Identity(d, d);
  return out;
}

}  // namespace

ReferenceAdmm::ReferenceAdmm(const Problem& problem, const Topology& topology, const SolverConfig& config)
    : problem_(problem), topology_(topology), config_(config), dim_(problem.dim()) {
  if (problem.agents() != topology.agents()) throw Error("reference ADMM: agent count mismatch");
  if (config.method == Method::kExtra) throw Error("reference ADMM covers bfgs_admm and first_order only");
  config.validate(topology.agents());
  const GraphMatrices g = matrices(topology);
  const Eigen::Index n = topology.edge_count();
  const Eigen::Index m = topology.agents();

  Eigen::MatrixXd a_hat(2 * n, m);
  a_hat << g.a_s, g.a_d;
  a_ = lift(a_hat, dim_);
  Eigen::MatrixXd d_hat(2 * n, n);
  d_hat << Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n);
  d_ = lift(d_hat, dim_);
  Eigen::MatrixXd c_hat = Eigen::MatrixXd::Zero(1, m);
  c_hat(0, config.designated) = 1.0;
  c_ = lift(c_hat, dim_);
  e_u_ = lift(g.e_u, dim_);
}

FullAdmmState ReferenceAdmm::initial_state() const {
  const Eigen::Index m = topology_.agents();
  const Eigen::Index n = topology_.edge_count();
  FullAdmmState s;
  s.x = Eigen::VectorXd::Zero(m * dim_);
  s.z = Eigen::VectorXd::Zero(n * dim_);
  s.theta = Eigen::VectorXd::Zero(dim_);
  s.y = Eigen::VectorXd::Zero(2 * n * dim_);
  s.lambda = Eigen::VectorXd::Zero(dim_);
  for (Eigen::Index i = 0; i < m; ++i) {
    s.curvature.push_back(LocalCurvature::scaled_identity(dim_, config_.a, config_.nu, config_.curvature_skip_tol));
  }
  return s;
}

Eigen::VectorXd ReferenceAdmm::block(const Eigen::VectorXd& stacked, int i) const {
  return stacked.segment(static_cast<Eigen::Index>(i) * dim_, dim_);
}

Eigen::VectorXd ReferenceAdmm::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < topology_.agents(); ++i) {
    g.segment(static_cast<Eigen::Index>(i) * dim_, dim_) = problem_.costs[i]->gradient(block(x, i));
  }
  return g;
}

std::vector<Eigen::VectorXd> ReferenceAdmm::alpha(const FullAdmmState& state) const {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index k = 0; k < topology_.edge_count(); ++k) out.emplace_back(state.y.segment(k * dim_, dim_));
  return out;
}

Eigen::VectorXd ReferenceAdmm::half_unsigned_incidence(const Eigen::VectorXd& x) const { return 0.5 * (e_u_ * x); }

FullAdmmState ReferenceAdmm::step(const FullAdmmState& state) const {
  const double mu1 = config_.mu1;
  const double mu2 = config_.mu2;

  // Gradient of the augmented Lagrangian in x.
  const Eigen::VectorXd grad = gradient(state.x);
  const Eigen::VectorXd coupling = a_ * state.x - d_ * state.z;
  const Eigen::VectorXd link = c_ * state.x - state.theta;
  const Eigen::VectorXd grad_lagrangian = grad + a_.transpose() * state.y + c_.transpose() * state.lambda +
                                          a_.transpose() * coupling / mu1 + c_.transpose() * link / mu2;

  Eigen::MatrixXd h = a_.transpose() * a_ / mu1 + c_.transpose() * c_ / mu2;
  h.diagonal().array() += config_.eps;
  if (config_.method == Method::kBfgsAdmm) {
    for (int i = 0; i < topology_.agents(); ++i) {
      const Eigen::MatrixXd b_inv = state.curvature[i].regularized_inverse();
      const Eigen::MatrixXd b = b_inv.ldlt().solve(Eigen::MatrixXd::Identity(dim_, dim_));
      h.block(static_cast<Eigen::Index>(i) * dim_, static_cast<Eigen::Index>(i) * dim_, dim_, dim_) += b;
    }
  }

  FullAdmmState next = state;
  next.x = state.x - h.ldlt().solve(grad_lagrangian);
  if (!next.x.allFinite()) throw DivergenceError(state.iteration, -1);

  // z: D^T y + D^T (A x - D z) / mu1 = 0.
  const Eigen::MatrixXd dtd = d_.transpose() * d_;
  next.z = dtd.ldlt().solve(d_.transpose() * (a_ * next.x) + mu1 * (d_.transpose() * state.y));

  next.theta = problem_.regularizer->prox(c_ * next.x + mu2 * state.lambda, mu2);
  next.y = state.y + (a_ * next.x - d_ * next.z) / mu1;
  next.lambda = state.lambda + (c_ * next.x - next.theta) / mu2;

  if (config_.method == Method::kBfgsAdmm) {
    const Eigen::VectorXd grad_next = gradient(next.x);
    for (int i = 0; i < topology_.agents(); ++i) {
      const Eigen::Index off = static_cast<Eigen::Index>(i) * dim_;
      bfgs_inverse_update(next.curvature[i], next.x.segment(off, dim_) - state.x.segment(off, dim_),
                          grad_next.segment(off, dim_) - grad.segment(off, dim_));
    }
  }
  ++next.iteration;
  return next;
}

}  // namespace bfgsadmm
