#pragma once

#include <vector>

#include <Eigen/Core>

#include "bfgsadmm/bfgs.hpp"
#include "bfgsadmm/graph.hpp"
#include "bfgsadmm/objectives.hpp"
#include "bfgsadmm/solver.hpp"

namespace bfgsadmm {

/// Variables of the unreduced three-block ADMM on
///   min F(x) + g(theta)  s.t.  A x = D z,  C x = theta.
struct FullAdmmState {
  Eigen::VectorXd x;       // m d
  Eigen::VectorXd z;       // n d
  Eigen::VectorXd theta;   // d
  Eigen::VectorXd y;       // 2 n d
  Eigen::VectorXd lambda;  // d
  std::vector<LocalCurvature> curvature;
  std::size_t iteration = 0;
};

/// Literal implementation of the inexact ADMM with materialized A, D and C.
///
/// Each round takes the Newton-like step x <- x - H^{-1} grad_x L with
///   H = blockdiag(B^{ii}) + A^T A / mu1 + C^T C / mu2 + eps I
/// solved densely, then the exact z-minimization, the proximal theta step
/// and both multiplier updates. B^{ii} comes from the same per-agent inverse
/// BFGS recursion as the fast path (zero for the first-order method).
/// Intended as a test oracle for small instances.
class ReferenceAdmm {
 public:
  ReferenceAdmm(const Problem& problem, const Topology& topology, const SolverConfig& config);

  FullAdmmState initial_state() const;
  FullAdmmState step(const FullAdmmState& state) const;

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& d() const { return d_; }
  const Eigen::MatrixXd& c() const { return c_; }

  /// Agent i's block of x.
  Eigen::VectorXd block(const Eigen::VectorXd& stacked, int i) const;
  /// First half of y split into per-edge blocks.
  std::vector<Eigen::VectorXd> alpha(const FullAdmmState& state) const;
  /// E_u x / 2 with E_u the lifted unsigned incidence.
  Eigen::VectorXd half_unsigned_incidence(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  const Problem& problem_;
  const Topology& topology_;
  SolverConfig config_;
  Eigen::Index dim_;
  Eigen::MatrixXd a_;
  Eigen::MatrixXd d_;
  Eigen::MatrixXd c_;
  Eigen::MatrixXd e_u_;
};

}  // namespace bfgsadmm
