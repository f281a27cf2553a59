#pragma once

#include <Eigen/Core>

namespace bfgsadmm {

/// Per-agent BFGS state: the unregularized inverse approximation and the
/// regularization bound nu. The curvature that enters the primal step is
/// B = (b_inv + I / nu)^{-1}, which keeps the eigenvalues of B below nu.
struct LocalCurvature {
  Eigen::MatrixXd b_inv;
  double nu = 1e6;
  double curvature_skip_tol = 1e-12;

  /// B_0^{-1} = a I.
  static LocalCurvature scaled_identity(Eigen::Index dim, double a, double nu = 1e6,
                                        double curvature_skip_tol = 1e-12);

  Eigen::Index dim() const { return b_inv.rows(); }

  /// b_inv + I / nu.
  Eigen::MatrixXd regularized_inverse() const;
};

/// Outcome of one inverse update.
enum class UpdateStatus { kApplied, kSkipped };

/// Inverse BFGS update with s = x_{t+1} - x_t and y = grad(x_{t+1}) - grad(x_t):
///
///   b_inv <- (I - s y^T / y^T s) b_inv (I - y s^T / y^T s) + s s^T / y^T s
///
/// The update is skipped when s^T y <= curvature_skip_tol * |s| |y|, so the
/// approximation stays positive definite. The result is symmetrized.
/// Throws bfgsadmm::Error on non-finite input or mismatched dimensions.
UpdateStatus bfgs_inverse_update(LocalCurvature& curvature, const Eigen::VectorXd& s,
                                 const Eigen::VectorXd& y);

/// Diagonal shift of agent i's block of the approximate augmented-Lagrangian
/// Hessian: |N_i| / mu1 + [i == l] / mu2 + eps.
double hessian_shift(int degree, bool is_designated, double mu1, double mu2, double eps);

/// (B + c I)^{-1} for B = (regularized b_inv)^{-1} and c = hessian_shift(...),
/// built from d Sherman-Morrison rank-one corrections of the regularized
/// inverse with v_k = sqrt(c) e_k. Never factors or solves a linear system.
Eigen::MatrixXd assemble_local_h_inv(const LocalCurvature& curvature, int degree, bool is_designated,
                                     double mu1, double mu2, double eps);

/// Same as above with the shift already computed. Requires shift > 0.
Eigen::MatrixXd assemble_local_h_inv(const LocalCurvature& curvature, double shift);

/// Constant stepsize of the first-order variant, 1 / hessian_shift(...).
double first_order_stepsize(int degree, bool is_designated, double mu1, double mu2, double eps);

}  // namespace bfgsadmm
