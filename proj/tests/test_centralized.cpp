#include <gtest/gtest.h>

#include "bfgsadmm/centralized.hpp"
#include "bfgsadmm/error.hpp"
#include "bfgsadmm/synthetic.hpp"
#include "support.hpp"

using namespace bfgsadmm;

TEST(Centralized, QuadraticClosedForm) {
  support::Gen gen(1);
  std::vector<std::shared_ptr<const SmoothLocalCost>> costs;
  Eigen::MatrixXd q_sum = Eigen::MatrixXd::Zero(4, 4);
  Eigen::VectorXd b_sum = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < 6; ++i) {
    const Eigen::MatrixXd q = gen.spd(4);
    const Eigen::VectorXd b = gen.vector(4);
    q_sum += q;
    b_sum += b;
    costs.push_back(quadratic_cost(q, b));
  }
  const CentralizedSolution sol = centralized_reference(Problem(costs, nullptr));
  const Eigen::VectorXd expected = -q_sum.llt().solve(b_sum);
  EXPECT_LE((sol.x_star - expected).norm(), 1e-10);
  EXPECT_NEAR(sol.f_star, 0.5 * expected.dot(q_sum * expected) + b_sum.dot(expected), 1e-10);
}

TEST(Centralized, L1ScalarSoftThreshold) {
  // min 0.5 q x^2 + b x + gamma |x|  =>  x = -soft(b, gamma) / q.
  for (double b : {-3.0, -0.2, 0.0, 0.4, 2.5}) {
    const double q = 2.0, gamma = 0.5;
    const Problem p({quadratic_cost(Eigen::MatrixXd::Constant(1, 1, q), Eigen::VectorXd::Constant(1, b))},
                    l1_regularizer(gamma));
    const CentralizedSolution sol = centralized_reference(p);
    const double expected = -std::copysign(std::max(std::abs(b) - gamma, 0.0), b) / q;
    EXPECT_NEAR(sol.x_star(0), expected, 1e-10) << b;
  }
}

TEST(Centralized, LogisticSkinSliceReachesTolerance) {
  const Dataset ds = skin_style_dataset(2000, 3);
  const auto parts = take_and_partition(ds, 1000, 10, 4);
  const Problem p = logistic_problem(parts, 2e-6);
  const CentralizedSolution sol = centralized_reference(p, 1e-12);
  EXPECT_LE(sol.residual, 1e-12);
  EXPECT_TRUE(sol.x_star.allFinite());
}

TEST(Centralized, IterationCapRaises) {
  const Dataset ds = skin_style_dataset(500, 5);
  const Problem p = logistic_problem(take_and_partition(ds, 500, 5, 6), 1e-3);
  EXPECT_THROW(centralized_reference(p, 1e-14, 3), Error);
}
