#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fairaudit/errors.hpp"

namespace fairaudit {

// the audit triple (y, s, a); sensitive labels are dense 0..K-1
struct AuditDataset {
    Eigen::MatrixXd targets;  // N x d_y
    Eigen::MatrixXd scores;   // N x d_s
    std::vector<int> sensitive;
    int k_classes = 0;
    long n() const { return static_cast<long>(targets.rows()); }
};

struct GroupCounts {
    std::vector<long> counts;  // length K, every entry >= 1
    long total = 0;
};

// checks lengths, finiteness, class sizes against the fold count, and
// re-encodes sensitive tokens to 0..K-1 in sorted order (numeric tokens
// numerically, so 0/1 columns keep their identity; others lexicographically).
// Row order therefore never affects the encoding.
AuditDataset validate_dataset(const Eigen::MatrixXd& targets,
                              const Eigen::MatrixXd& scores,
                              const std::vector<std::string>& sensitive,
                              int folds);

AuditDataset validate_dataset(const std::vector<double>& targets,
                              const std::vector<double>& scores,
                              const std::vector<long long>& sensitive,
                              int folds);

GroupCounts group_counts(const AuditDataset& ds);

}  // namespace fairaudit
