#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "fairaudit/classifier.hpp"
#include "fairaudit/dataset.hpp"

namespace fairaudit {

struct FoldAssignment {
    std::vector<int> fold_of;  // values in 0..n_folds-1
    int n_folds = 0;
};

// within each class: seeded shuffle, then round-robin dealing, so per-class
// fold sizes differ by at most one.
FoldAssignment stratified_folds(const std::vector<int>& labels, int n_folds,
                                std::uint64_t seed);

enum class InputKind { S, Y, YS };

const char* input_kind_name(InputKind kind);
Eigen::MatrixXd input_matrix(const AuditDataset& ds, InputKind kind);

struct ClassifierConfig {
    int n_basis = 100;
    double l2_strength = 1e-3;
    double clamp_epsilon = 1e-6;
};

// cross-validated probabilities: each row predicted by a model trained on
// the other folds. held_in=true instead fits once on everything and predicts
// the same rows. Standardization warnings, if any, are appended to
// `diagnostics` when given.
ProbabilityMatrix held_out_probs(const AuditDataset& ds, InputKind kind,
                                 int n_folds, std::uint64_t seed,
                                 const ClassifierConfig& cfg,
                                 bool held_in = false,
                                 std::vector<std::string>* diagnostics = nullptr);

// mean per-class recall under argmax; ties go to the smaller class index
double balanced_accuracy(const ProbabilityMatrix& probs,
                         const std::vector<int>& labels);

}  // namespace fairaudit
