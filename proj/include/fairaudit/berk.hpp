#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fairaudit/audit.hpp"

namespace fairaudit {

struct TrainingSet {
    Eigen::MatrixXd features;  // N x p, standardized
    Eigen::VectorXd target;
    std::vector<int> sensitive;  // binary
    std::vector<std::string> feature_names;
};

// standardizes features (zero-variance columns get scale 1) and validates
TrainingSet make_training_set(const Eigen::MatrixXd& features,
                              const Eigen::VectorXd& target,
                              const std::vector<int>& sensitive,
                              std::vector<std::string> feature_names = {});

struct LinearModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;
    double lambda = 0.0;
};

// minimizes (1/N) |y - Xw - b|^2 + lambda (u' w)^2 + 1e-8 |w|^2 where
// u = (1/(N0 N1)) sum_{i:a=1} sum_{j:a=0} g(y_i - y_j) (x_i - x_j) and
// g(t) = exp(-t^2 / (2 bw^2)). Closed-form normal-equations solve.
LinearModel fit_berk(const TrainingSet& train, double lambda,
                     double kernel_bandwidth);

Eigen::VectorXd predict(const LinearModel& model, const Eigen::MatrixXd& features);

// the penalty direction u above; exposed so tests can evaluate the term
Eigen::VectorXd berk_penalty_direction(const TrainingSet& train,
                                       double kernel_bandwidth);

struct SweepResult {
    std::vector<double> lambdas;
    std::vector<FairnessReport> reports;
    std::vector<double> rmse;
};

// 70/30 stratified train/audit split; per lambda: fit on train, score the
// audit split, run the full audit on (y, y_hat, a), record held-out RMSE.
// kernel bandwidth = population std of the training targets.
SweepResult sweep(const TrainingSet& train, const std::vector<double>& lambdas,
                  const AuditConfig& config);

// {0} followed by n_points log-spaced values in [lo, hi]
std::vector<double> default_lambda_grid(double lo = 1e-4, double hi = 1e2,
                                        int n_points = 16, bool include_zero = true);

// UCI Communities and Crime loader: headerless 128-column files get the
// canonical layout (target last, racepctblack at index 7, first five columns
// identifiers); otherwise the first row must be a header naming
// ViolentCrimesPerPop/violent_crime_rate and racepctblack/pct_black.
// Columns with missing ('?') or non-numeric values are dropped from the
// features; protected = pct_black strictly > 0.5.
TrainingSet load_communities(const std::string& path);

// group-shifted regression task for sweep demonstrations: a noisy driver,
// a nearly clean group proxy, a noise column, and a target shifted +2 for
// the protected group
TrainingSet make_surrogate(long n, std::uint64_t seed);

}  // namespace fairaudit
