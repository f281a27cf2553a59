#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "bfgsadmm/data.hpp"
#include "bfgsadmm/objectives.hpp"

namespace bfgsadmm {

/// Q = U diag(lambda) U^T with U a random orthogonal matrix and lambda
/// log-spaced over [1, condition]; both ends of the range are attained.
Eigen::MatrixXd random_spd(Eigen::Index dim, double condition, std::uint64_t seed);

struct QuadraticAgentData {
  Eigen::MatrixXd q;
  Eigen::VectorXd b;
};

/// Per-agent (Q_i, b_i) with spectra in [1, condition] and b_i ~ N(0, I).
std::vector<QuadraticAgentData> random_quadratic_agents(int agents, Eigen::Index dim, double condition,
                                                        std::uint64_t seed);

/// Labels drawn from a logistic model: w ~ N(0, I), y ~ Bernoulli(sigmoid(w^T x_true)),
/// x_true ~ N(0, I) scaled by `signal`.
std::vector<LabeledSample> random_logistic_samples(std::size_t count, Eigen::Index dim, std::uint64_t seed,
                                                   double signal = 1.0);

/// Three colour-like features in [0, 1] with overlapping classes, labelled
/// {1, 2} like the skin segmentation data. Returned as a sparse dataset so it
/// can go through the LIBSVM writer and parser.
Dataset skin_style_dataset(std::size_t count, std::uint64_t seed);

/// Averaged logistic problem: agent i holds (1/m) f^i over its samples, plus
/// gamma |x|_1 (a zero regularizer when gamma == 0).
Problem logistic_problem(const std::vector<std::vector<LabeledSample>>& parts, double gamma, double ridge = 0.0);

/// sum_i 0.5 x^T Q_i x + b_i^T x (+ gamma |x|_1).
Problem quadratic_problem(const std::vector<QuadraticAgentData>& agents, double gamma = 0.0);

}  // namespace bfgsadmm
