#include "bfgsadmm/bfgs.hpp"

#include <cmath>
#include <string>

#include "bfgsadmm/error.hpp"

namespace bfgsadmm {

LocalCurvature LocalCurvature::scaled_identity(Eigen::Index dim, double a, double nu,
                                               double curvature_skip_tol) {
  if (!(a > 0.0) || !(nu > 0.0)) {
    throw Error("BFGS initialization requires a > 0 and nu > 0");
  }
  LocalCurvature c;
  c.b_inv = a * Eigen::MatrixXd::Identity(dim, dim);
  c.nu = nu;
  c.curvature_skip_tol = curvature_skip_tol;
  return c;
}

Eigen::MatrixXd LocalCurvature::regularized_inverse() const {
  Eigen::MatrixXd r = b_inv;
  r.diagonal().array() += 1.0 / nu;
  return r;
}

UpdateStatus bfgs_inverse_update(LocalCurvature& curvature, const Eigen::VectorXd& s,
                                 const Eigen::VectorXd& y) {
  const Eigen::Index d = curvature.dim();
  if (s.size() != d || y.size() != d) {
    throw Error("BFGS update: expected vectors of size " + std::to_string(d) + ", got " +
                std::to_string(s.size()) + " and " + std::to_string(y.size()));
  }
  if (!s.allFinite() || !y.allFinite()) {
    throw Error("BFGS update: non-finite step or gradient difference");
  }
  const double sy = s.dot(y);
  if (!(sy > curvature.curvature_skip_tol * s.norm() * y.norm())) {
    return UpdateStatus::kSkipped;
  }
  const double rho = 1.0 / sy;
  // (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded to avoid forming the
  // d x d projector: H - rho (s (Hy)^T + (Hy) s^T) + (rho^2 y^T H y + rho) s s^T.
  const Eigen::VectorXd hy = curvature.b_inv * y;
  const double yhy = y.dot(hy);
  Eigen::MatrixXd next = curvature.b_inv;
  next.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
  next.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
  curvature.b_inv = 0.5 * (next + next.transpose());
  return UpdateStatus::kApplied;
}

double hessian_shift(int degree, bool is_designated, double mu1, double mu2, double eps) {
  return static_cast<double>(degree) / mu1 + (is_designated ? 1.0 / mu2 : 0.0) + eps;
}

Eigen::MatrixXd assemble_local_h_inv(const LocalCurvature& curvature, double shift) {
  if (!(shift > 0.0)) {
    throw Error("Hessian shift must be positive, got " + std::to_string(shift));
  }
  Eigen::MatrixXd c = curvature.regularized_inverse();
  const Eigen::Index d = c.rows();
  // Adding shift * e_k e_k^T is a rank-one correction with v = sqrt(shift) e_k,
  // so C v = sqrt(shift) C(:, k) and v^T C v = shift C(k, k).
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXd col = c.col(k);
    const double denom = 1.0 + shift * col(k);
    c.noalias() -= (shift / denom) * (col * col.transpose());
  }
  return 0.5 * (c + c.transpose());
}

Eigen::MatrixXd assemble_local_h_inv(const LocalCurvature& curvature, int degree, bool is_designated,
                                     double mu1, double mu2, double eps) {
  return assemble_local_h_inv(curvature, hessian_shift(degree, is_designated, mu1, mu2, eps));
}

double first_order_stepsize(int degree, bool is_designated, double mu1, double mu2, double eps) {
  return 1.0 / hessian_shift(degree, is_designated, mu1, mu2, eps);
}

}  // namespace bfgsadmm
