#include "fairaudit/crossval.hpp"

#include <algorithm>

#include "fairaudit/rng.hpp"

namespace fairaudit {

FoldAssignment stratified_folds(const std::vector<int>& labels, int n_folds, std::uint64_t seed) {
    if (n_folds < 1) throw data_error("n_folds must be >= 1");
    int k = 0;
    for (int a : labels) k = std::max(k, a + 1);

    FoldAssignment fa;
    fa.n_folds = n_folds;
    fa.fold_of.assign(labels.size(), 0);

    Rng rng(seed);
    for (int c = 0; c < k; ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) idx.push_back(i);
        if (static_cast<int>(idx.size()) < n_folds)
            throw data_error("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                             " members, fewer than " + std::to_string(n_folds) + " folds");
        rng.shuffle(idx);
        for (std::size_t j = 0; j < idx.size(); ++j)
            fa.fold_of[idx[j]] = static_cast<int>(j % static_cast<std::size_t>(n_folds));
    }
    return fa;
}

const char* input_kind_name(InputKind kind) {
    switch (kind) {
        case InputKind::S: return "S";
        case InputKind::Y: return "Y";
        default: return "YS";
    }
}

Eigen::MatrixXd input_matrix(const AuditDataset& ds, InputKind kind) {
    switch (kind) {
        case InputKind::S: return ds.scores;
        case InputKind::Y: return ds.targets;
        default: {
            Eigen::MatrixXd m(ds.n(), ds.targets.cols() + ds.scores.cols());
            m << ds.targets, ds.scores;
            return m;
        }
    }
}

static std::vector<int> rows_subset(const std::vector<int>& v, const std::vector<long>& rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (long r : rows) out.push_back(v[r]);
    return out;
}

static Eigen::MatrixXd matrix_subset(const Eigen::MatrixXd& m, const std::vector<long>& rows) {
    Eigen::MatrixXd out(static_cast<long>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<long>(i)) = m.row(rows[i]);
    return out;
}

static void note_zero_variance(const RbfFeatureMap& map, InputKind kind,
                               std::vector<std::string>* diagnostics,
                               std::vector<std::string>& seen) {
    if (!diagnostics) return;
    for (int dim : map.zero_variance_dims) {
        std::string msg = std::string("classifier(") + input_kind_name(kind) + "): input dimension " +
                          std::to_string(dim) + " has zero variance in a training split; scale fixed at 1";
        if (std::find(seen.begin(), seen.end(), msg) == seen.end()) {
            seen.push_back(msg);
            diagnostics->push_back(msg);
        }
    }
}

ProbabilityMatrix held_out_probs(const AuditDataset& ds, InputKind kind, int n_folds,
                                 std::uint64_t seed, const ClassifierConfig& cfg, bool held_in,
                                 std::vector<std::string>* diagnostics) {
    const Eigen::MatrixXd x = input_matrix(ds, kind);
    const std::uint64_t kind_tag = (static_cast<std::uint64_t>(kind) + 1) << 16;
    std::vector<std::string> seen;

    ProbabilityMatrix out;
    out.clamp_epsilon = cfg.clamp_epsilon;
    out.probs.resize(ds.n(), ds.k_classes);

    if (held_in) {
        const RbfFeatureMap map = make_feature_map(x, cfg.n_basis, derive_seed(seed, kind_tag));
        note_zero_variance(map, kind, diagnostics, seen);
        const LogisticModel model =
            fit_logistic(map, x, ds.sensitive, ds.k_classes, cfg.l2_strength);
        return predict_proba(model, x, cfg.clamp_epsilon);
    }

    if (n_folds < 2) throw data_error("held-out estimation needs n_folds >= 2");
    const FoldAssignment fa = stratified_folds(ds.sensitive, n_folds, derive_seed(seed, 0xf01d5));

    for (int f = 0; f < n_folds; ++f) {
        std::vector<long> train_rows, test_rows;
        for (long i = 0; i < ds.n(); ++i)
            (fa.fold_of[i] == f ? test_rows : train_rows).push_back(i);

        const Eigen::MatrixXd x_train = matrix_subset(x, train_rows);
        const std::vector<int> a_train = rows_subset(ds.sensitive, train_rows);
        const RbfFeatureMap map =
            make_feature_map(x_train, cfg.n_basis, derive_seed(seed, kind_tag + 1 + f));
        note_zero_variance(map, kind, diagnostics, seen);
        const LogisticModel model =
            fit_logistic(map, x_train, a_train, ds.k_classes, cfg.l2_strength);

        const ProbabilityMatrix fold_probs =
            predict_proba(model, matrix_subset(x, test_rows), cfg.clamp_epsilon);
        for (std::size_t i = 0; i < test_rows.size(); ++i)
            out.probs.row(test_rows[i]) = fold_probs.probs.row(static_cast<long>(i));
    }
    return out;
}

double balanced_accuracy(const ProbabilityMatrix& probs, const std::vector<int>& labels) {
    if (probs.probs.rows() != static_cast<long>(labels.size()))
        throw data_error("probability rows and labels misaligned");
    const int k = static_cast<int>(probs.probs.cols());
    std::vector<long> correct(k, 0), count(k, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        int argmax = 0;
        for (int c = 1; c < k; ++c)
            if (probs.probs(static_cast<long>(i), c) > probs.probs(static_cast<long>(i), argmax))
                argmax = c;  // strict >, so ties keep the smaller index
        ++count[labels[i]];
        if (argmax == labels[i]) ++correct[labels[i]];
    }
    double sum = 0.0;
    for (int c = 0; c < k; ++c)
        sum += count[c] ? static_cast<double>(correct[c]) / static_cast<double>(count[c]) : 0.0;
    return sum / static_cast<double>(k);
}

}  // namespace fairaudit
