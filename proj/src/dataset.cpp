#include "fairaudit/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <unordered_map>

namespace fairaudit {

static bool token_as_int(const std::string& t, long long& v) {
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size()) return false;
    v = x;
    return true;
}

// numeric tokens first, in numeric order; everything else after, lexicographic
static bool token_less(const std::string& lhs, const std::string& rhs) {
    long long a = 0, b = 0;
    const bool ia = token_as_int(lhs, a), ib = token_as_int(rhs, b);
    if (ia && ib) return a < b;
    if (ia != ib) return ia;
    return lhs < rhs;
}

static AuditDataset validate_impl(Eigen::MatrixXd targets, Eigen::MatrixXd scores,
                                  const std::vector<std::string>& sensitive, int folds) {
    const long n = static_cast<long>(sensitive.size());
    if (targets.rows() != n || scores.rows() != n)
        throw data_error("targets, scores and sensitive must have the same length (got " +
                         std::to_string(targets.rows()) + ", " + std::to_string(scores.rows()) +
                         ", " + std::to_string(n) + ")");
    if (n == 0) throw data_error("dataset is empty");
    if (folds < 1) throw data_error("fold count must be >= 1");
    if (!targets.allFinite()) throw data_error("targets contain non-finite values");
    if (!scores.allFinite()) throw data_error("scores contain non-finite values");

    // dense re-encoding by sorted token value, so the coding is independent of
    // row order and an existing 0/1 column maps to itself
    std::vector<std::string> tokens(sensitive);
    std::sort(tokens.begin(), tokens.end(), token_less);
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    std::unordered_map<std::string, int> code;
    for (std::size_t c = 0; c < tokens.size(); ++c) code.emplace(tokens[c], static_cast<int>(c));
    std::vector<int> dense(sensitive.size());
    for (std::size_t i = 0; i < sensitive.size(); ++i) dense[i] = code.at(sensitive[i]);
    const int k = static_cast<int>(code.size());
    if (k < 2) throw data_error("sensitive attribute has fewer than 2 distinct values");

    std::vector<long> counts(k, 0);
    for (int a : dense) ++counts[a];
    for (int a = 0; a < k; ++a)
        if (counts[a] < folds)
            throw data_error("sensitive class " + std::to_string(a) + " has " +
                             std::to_string(counts[a]) + " instances, fewer than the fold count " +
                             std::to_string(folds));

    AuditDataset ds;
    ds.targets = std::move(targets);
    ds.scores = std::move(scores);
    ds.sensitive = std::move(dense);
    ds.k_classes = k;
    return ds;
}

AuditDataset validate_dataset(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& scores,
                              const std::vector<std::string>& sensitive, int folds) {
    return validate_impl(targets, scores, sensitive, folds);
}

AuditDataset validate_dataset(const std::vector<double>& targets, const std::vector<double>& scores,
                              const std::vector<long long>& sensitive, int folds) {
    Eigen::MatrixXd y = Eigen::Map<const Eigen::VectorXd>(targets.data(), targets.size());
    Eigen::MatrixXd s = Eigen::Map<const Eigen::VectorXd>(scores.data(), scores.size());
    std::vector<std::string> tokens;
    tokens.reserve(sensitive.size());
    for (long long v : sensitive) tokens.push_back(std::to_string(v));
    return validate_impl(std::move(y), std::move(s), tokens, folds);
}

GroupCounts group_counts(const AuditDataset& ds) {
    GroupCounts gc;
    gc.counts.assign(ds.k_classes, 0);
    for (int a : ds.sensitive) ++gc.counts[a];
    gc.total = ds.n();
    return gc;
}

}  // namespace fairaudit
