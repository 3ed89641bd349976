#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairaudit/dataset.hpp"

namespace fairaudit {

struct AuditConfig {
    int n_folds = 10;
    int n_basis = 100;
    double l2_strength = 1e-3;
    double clamp_epsilon = 1e-6;
    std::uint64_t seed = 0;
    bool held_in = false;
    bool clamp_negative_nmi = false;
};

struct FairnessReport {
    // density ratios exist only for binary sensitive attributes
    std::optional<double> ratio_ind, ratio_sep, ratio_suf;
    double nmi_ind = 0.0;
    // empty when the conditional-entropy normalizer vanishes
    std::optional<double> nmi_sep, nmi_suf;
    double balanced_accuracy_s = 0.0;
    double balanced_accuracy_y = 0.0;
    double balanced_accuracy_ys = 0.0;
    long n = 0;
    int k_classes = 0;
    std::vector<std::string> diagnostics;
};

// the full pipeline: three cross-validated classifiers (inputs S, Y, (Y,S)),
// ratio measures when K=2, normalized MI measures, balanced accuracies,
// and a deterministic diagnostics list.
FairnessReport run_audit(const AuditDataset& ds, const AuditConfig& config);

}  // namespace fairaudit
