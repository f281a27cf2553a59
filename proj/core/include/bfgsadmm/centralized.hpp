#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "bfgsadmm/objectives.hpp"

namespace bfgsadmm {

struct CentralizedSolution {
  Eigen::VectorXd x_star;
  double f_star = 0.0;  // sum_i f^i(x*) + g(x*)
  std::size_t iterations = 0;
  double residual = 0.0;  // proximal-gradient mapping norm at exit
};

/// Solves min_x sum_i f^i(x) + g(x) on a single machine.
///
/// Quadratic costs with g = 0 use the closed form -(sum Q_i)^{-1} sum b_i.
/// Everything else runs accelerated proximal gradient with backtracking and
/// function-value restarts until the gradient mapping norm
/// L |x - prox_{g/L}(x - grad f(x) / L)| drops to `tol`.
/// Throws bfgsadmm::Error if `max_iter` is exhausted first.
CentralizedSolution centralized_reference(const Problem& problem, double tol = 1e-12,
                                          std::size_t max_iter = 1'000'000);

}  // namespace bfgsadmm
