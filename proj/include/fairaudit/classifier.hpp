#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fairaudit/errors.hpp"

namespace fairaudit {

// Gaussian bumps exp(-|z - c|^2 / (2 h^2)) over standardized inputs,
// plus a trailing bias column.
struct RbfFeatureMap {
    Eigen::MatrixXd centres;  // M x d, standardized units
    double bandwidth = 1.0;
    bool include_bias = true;
    Eigen::VectorXd mean;   // per input dimension
    Eigen::VectorXd scale;  // > 0; zero-variance dims get scale 1
    std::vector<int> zero_variance_dims;
};

// centres drawn with replacement from the standardized rows; bandwidth from
// the median pairwise distance of a <= 500 row subsample (fallback 1.0).
RbfFeatureMap make_feature_map(const Eigen::MatrixXd& inputs, int n_basis,
                               std::uint64_t seed);
// same, but with a caller-fixed bandwidth
RbfFeatureMap make_feature_map(const Eigen::MatrixXd& inputs, int n_basis,
                               double bandwidth, std::uint64_t seed);

Eigen::MatrixXd featurize(const RbfFeatureMap& map, const Eigen::MatrixXd& inputs);

// multinomial logistic regression in RBF feature space; class 0 is the
// reference, so K=2 keeps a single weight column and the complement rule.
struct LogisticModel {
    RbfFeatureMap feature_map;
    Eigen::MatrixXd weights;  // (M+1) x (K-1)
    double l2_strength = 0.0;
    int k_classes = 2;
};

struct ProbabilityMatrix {
    Eigen::MatrixXd probs;  // N x K, rows sum to 1 before clamping
    double clamp_epsilon = 0.0;
};

// minimizes mean cross-entropy + (l2/2)|W|^2 over the non-bias rows.
// Newton iterations with Armijo backtracking to gradient norm 1e-6
// (hard cap 500 iterations); deterministic.
LogisticModel fit_logistic(const RbfFeatureMap& map, const Eigen::MatrixXd& inputs,
                           const std::vector<int>& labels, int k_classes,
                           double l2_strength);

// softmax probabilities, clamped into [eps, 1-eps]. K=2 keeps the exact
// complement; K>=3 renormalizes after clamping and clamps once more.
ProbabilityMatrix predict_proba(const LogisticModel& model,
                                const Eigen::MatrixXd& inputs,
                                double clamp_epsilon);

// objective/gradient on raw feature matrices, exposed for numeric checks
double logistic_objective(const Eigen::MatrixXd& features,
                          const std::vector<int>& labels, int k_classes,
                          double l2_strength, const Eigen::MatrixXd& weights);
Eigen::MatrixXd logistic_gradient(const Eigen::MatrixXd& features,
                                  const std::vector<int>& labels, int k_classes,
                                  double l2_strength, const Eigen::MatrixXd& weights);

}  // namespace fairaudit
