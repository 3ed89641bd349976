#include "fairaudit/berk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "fairaudit/rng.hpp"

namespace fairaudit {

TrainingSet make_training_set(const Eigen::MatrixXd& features, const Eigen::VectorXd& target,
                              const std::vector<int>& sensitive,
                              std::vector<std::string> feature_names) {
    const long n = features.rows();
    if (target.size() != n || static_cast<long>(sensitive.size()) != n)
        throw data_error("features, target and sensitive must have the same length");
    if (!features.allFinite() || !target.allFinite())
        throw data_error("training set contains non-finite values");
    long n1 = 0;
    for (int a : sensitive) {
        if (a != 0 && a != 1) throw data_error("sensitive labels must be 0/1");
        n1 += a;
    }
    if (n1 == 0 || n1 == n) throw data_error("both sensitive classes must be present");

    TrainingSet ts;
    ts.features = features;
    for (long j = 0; j < features.cols(); ++j) {
        const double mean = features.col(j).mean();
        double sd = std::sqrt((features.col(j).array() - mean).square().sum() / static_cast<double>(n));
        if (sd < 1e-12) sd = 1.0;
        ts.features.col(j) = (features.col(j).array() - mean) / sd;
    }
    ts.target = target;
    ts.sensitive = sensitive;
    if (feature_names.empty())
        for (long j = 0; j < features.cols(); ++j) feature_names.push_back("x" + std::to_string(j));
    ts.feature_names = std::move(feature_names);
    return ts;
}

Eigen::VectorXd berk_penalty_direction(const TrainingSet& train, double kernel_bandwidth) {
    if (!(kernel_bandwidth > 0.0)) throw data_error("kernel bandwidth must be positive");
    const long n = train.features.rows();
    const long p = train.features.cols();
    std::vector<long> g1, g0;
    for (long i = 0; i < n; ++i) (train.sensitive[i] == 1 ? g1 : g0).push_back(i);

    // u = (1/(N0 N1)) [ sum_i x_i row_i - sum_j x_j col_j ] with
    // row_i = sum_j g(y_i - y_j), col_j = sum_i g(y_i - y_j)
    const double inv = -1.0 / (2.0 * kernel_bandwidth * kernel_bandwidth);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(p);
    std::vector<double> col_sum(g0.size(), 0.0);
    for (long ii = 0; ii < static_cast<long>(g1.size()); ++ii) {
        const double yi = train.target(g1[ii]);
        double row_sum = 0.0;
        for (long jj = 0; jj < static_cast<long>(g0.size()); ++jj) {
            const double d = yi - train.target(g0[jj]);
            const double g = std::exp(d * d * inv);
            row_sum += g;
            col_sum[jj] += g;
        }
        u += row_sum * train.features.row(g1[ii]).transpose();
    }
    for (long jj = 0; jj < static_cast<long>(g0.size()); ++jj)
        u -= col_sum[jj] * train.features.row(g0[jj]).transpose();
    u /= static_cast<double>(g0.size()) * static_cast<double>(g1.size());
    return u;
}

LinearModel fit_berk(const TrainingSet& train, double lambda, double kernel_bandwidth) {
    if (lambda < 0.0) throw data_error("lambda must be >= 0");
    const long n = train.features.rows();
    const long p = train.features.cols();

    const Eigen::VectorXd u = berk_penalty_direction(train, kernel_bandwidth);

    Eigen::MatrixXd xt(n, p + 1);
    xt << train.features, Eigen::VectorXd::Ones(n);
    Eigen::VectorXd ut(p + 1);
    ut << u, 0.0;  // the intercept cancels in prediction differences

    Eigen::MatrixXd a = xt.transpose() * xt / static_cast<double>(n);
    a += lambda * ut * ut.transpose();
    for (long j = 0; j < p; ++j) a(j, j) += 1e-8;  // documented ridge; intercept unpenalized
    const Eigen::VectorXd b = xt.transpose() * train.target / static_cast<double>(n);

    Eigen::LDLT<Eigen::MatrixXd> solver(a);
    Eigen::VectorXd theta = solver.solve(b);
    // half-gradient residual; one refinement pass if the solve left slack
    Eigen::VectorXd resid = a * theta - b;
    if (resid.norm() * 2.0 > 1e-8) {
        theta += solver.solve(-resid);
        resid = a * theta - b;
    }
    if (!theta.allFinite()) throw numerical_error("penalized least-squares solve failed");

    LinearModel model;
    model.weights = theta.head(p);
    model.intercept = theta(p);
    model.lambda = lambda;
    return model;
}

Eigen::VectorXd predict(const LinearModel& model, const Eigen::MatrixXd& features) {
    if (features.cols() != model.weights.size())
        throw data_error("feature width does not match the model");
    return (features * model.weights).array() + model.intercept;
}

std::vector<double> default_lambda_grid(double lo, double hi, int n_points, bool include_zero) {
    if (n_points < 1 || !(lo > 0.0) || !(hi >= lo)) throw data_error("bad lambda grid");
    std::vector<double> grid;
    if (include_zero) grid.push_back(0.0);
    if (n_points == 1) {
        grid.push_back(lo);
        return grid;
    }
    const double step = (std::log10(hi) - std::log10(lo)) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) grid.push_back(std::pow(10.0, std::log10(lo) + step * i));
    return grid;
}

SweepResult sweep(const TrainingSet& train, const std::vector<double>& lambdas,
                  const AuditConfig& config) {
    if (lambdas.empty()) throw data_error("lambda grid is empty");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (!(lambdas[i] > lambdas[i - 1])) throw data_error("lambda grid must be strictly increasing");

    // 70/30 stratified split
    const long n = train.features.rows();
    std::vector<long> train_rows, audit_rows;
    Rng rng(derive_seed(config.seed, 0x517EE7));
    for (int c = 0; c < 2; ++c) {
        std::vector<long> idx;
        for (long i = 0; i < n; ++i)
            if (train.sensitive[i] == c) idx.push_back(i);
        rng.shuffle(idx);
        const std::size_t cut = static_cast<std::size_t>(0.7 * static_cast<double>(idx.size()));
        for (std::size_t j = 0; j < idx.size(); ++j)
            (j < cut ? train_rows : audit_rows).push_back(idx[j]);
    }
    if (train_rows.size() < 4 || audit_rows.size() < 4) throw data_error("too few rows to sweep");

    auto take = [&](const std::vector<long>& rows) {
        TrainingSet sub;
        sub.features.resize(static_cast<long>(rows.size()), train.features.cols());
        sub.target.resize(static_cast<long>(rows.size()));
        sub.sensitive.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            sub.features.row(static_cast<long>(i)) = train.features.row(rows[i]);
            sub.target(static_cast<long>(i)) = train.target(rows[i]);
            sub.sensitive.push_back(train.sensitive[rows[i]]);
        }
        sub.feature_names = train.feature_names;
        return sub;
    };
    const TrainingSet fit_set = take(train_rows);
    const TrainingSet audit_set = take(audit_rows);

    const double bw = std::sqrt((fit_set.target.array() - fit_set.target.mean()).square().sum() /
                                static_cast<double>(fit_set.target.size()));
    if (!(bw > 0.0)) throw data_error("training target is constant");

    SweepResult result;
    result.lambdas = lambdas;
    for (double lambda : lambdas) {
        const LinearModel model = fit_berk(fit_set, lambda, bw);
        const Eigen::VectorXd scores = predict(model, audit_set.features);

        std::vector<double> y(audit_set.target.data(), audit_set.target.data() + audit_set.target.size());
        std::vector<double> s(scores.data(), scores.data() + scores.size());
        std::vector<long long> a(audit_set.sensitive.begin(), audit_set.sensitive.end());
        const AuditDataset ds = validate_dataset(y, s, a, config.n_folds);

        result.reports.push_back(run_audit(ds, config));
        result.rmse.push_back(std::sqrt((audit_set.target - scores).squaredNorm() /
                                        static_cast<double>(scores.size())));
    }
    return result;
}

TrainingSet make_surrogate(long n, std::uint64_t seed) {
    if (n < 40) throw data_error("surrogate needs n >= 40");
    Rng ra(seed, 0), rh(seed, 1), rn(seed, 2);
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    std::vector<int> a(n);
    for (long i = 0; i < n; ++i) {
        a[i] = ra.uniform() < 0.5 ? 1 : 0;
        const double h = rh.normal();
        x(i, 0) = h + 1.2 * rn.normal();          // noisy driver of the target
        x(i, 1) = a[i] + 0.05 * rn.normal();      // nearly clean group proxy
        x(i, 2) = rn.normal();                    // pure noise
        y(i) = h + 2.0 * a[i] + 0.5 * rn.normal();  // group-shifted target
    }
    return make_training_set(x, y, a, {"driver", "proxy", "noise"});
}

// ---- Communities and Crime ----

namespace {
bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::vector<std::string> uci_column_names() {
    std::vector<std::string> names = {"state", "county", "community", "communityname", "fold"};
    names.push_back("population");
    names.push_back("householdsize");
    names.push_back("racepctblack");
    for (int j = 8; j < 127; ++j) names.push_back("attr" + std::to_string(j));
    names.push_back("ViolentCrimesPerPop");
    return names;
}

long find_column(const std::vector<std::string>& header, const std::vector<std::string>& candidates) {
    for (const auto& want : candidates)
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == want) return static_cast<long>(j);
    return -1;
}
}  // namespace

TrainingSet load_communities(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    if (rows.size() < 2) throw data_error("'" + path + "' has too few rows");

    // header detection: any first-row field that is neither numeric nor '?'
    bool has_header = false;
    for (const auto& f : rows[0]) {
        double v;
        if (f != "?" && !parse_number(f, v)) {
            has_header = true;
            break;
        }
    }

    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (has_header) {
        header = rows[0];
        first_data = 1;
    } else if (rows[0].size() == 128) {
        header = uci_column_names();
    } else {
        throw data_error("headerless file must have the 128-column layout (got " +
                         std::to_string(rows[0].size()) + " columns)");
    }

    const long n_cols = static_cast<long>(header.size());
    for (std::size_t r = first_data; r < rows.size(); ++r)
        if (static_cast<long>(rows[r].size()) != n_cols)
            throw data_error("row " + std::to_string(r + 1) + " has " +
                             std::to_string(rows[r].size()) + " fields, expected " +
                             std::to_string(n_cols));

    const long target_col = find_column(header, {"ViolentCrimesPerPop", "violent_crime_rate"});
    const long black_col = find_column(header, {"racepctblack", "pct_black"});
    if (target_col < 0)
        throw data_error("missing target column (ViolentCrimesPerPop or violent_crime_rate)");
    if (black_col < 0)
        throw data_error("missing protected-source column (racepctblack or pct_black)");

    const std::set<std::string> identifiers = {"state", "county", "community", "communityname", "fold"};
    const long n = static_cast<long>(rows.size() - first_data);

    std::vector<long> feature_cols;
    for (long j = 0; j < n_cols; ++j) {
        if (j == target_col || identifiers.count(header[j])) continue;
        bool clean = true;
        for (std::size_t r = first_data; r < rows.size() && clean; ++r) {
            double v;
            clean = parse_number(rows[r][j], v);
        }
        if (clean) feature_cols.push_back(j);  // columns with '?' or text are dropped
    }
    if (feature_cols.empty()) throw data_error("no usable feature columns");

    Eigen::MatrixXd x(n, static_cast<long>(feature_cols.size()));
    Eigen::VectorXd y(n);
    std::vector<int> a(n);
    std::vector<std::string> names;
    for (long j : feature_cols) names.push_back(header[j]);

    for (long i = 0; i < n; ++i) {
        const auto& row = rows[first_data + i];
        double v;
        if (!parse_number(row[target_col], v))
            throw data_error("non-numeric target in row " + std::to_string(first_data + i + 1));
        y(i) = v;
        if (!parse_number(row[black_col], v))
            throw data_error("non-numeric protected-source value in row " +
                             std::to_string(first_data + i + 1));
        a[i] = v > 0.5 ? 1 : 0;  // strictly more than half
        for (std::size_t c = 0; c < feature_cols.size(); ++c) {
            parse_number(row[feature_cols[c]], v);
            x(i, static_cast<long>(c)) = v;
        }
    }

    return make_training_set(x, y, a, std::move(names));
}

}  // namespace fairaudit
