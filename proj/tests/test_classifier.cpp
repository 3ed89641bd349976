#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairaudit/classifier.hpp"
#include "fairaudit/crossval.hpp"
#include "fairaudit/rng.hpp"
#include "fairaudit/synthetic.hpp"

using namespace fairaudit;

namespace {

Eigen::MatrixXd gaussian_column(long n, std::uint64_t seed) {
    Rng r(seed);
    Eigen::MatrixXd x(n, 1);
    for (long i = 0; i < n; ++i) x(i, 0) = r.normal();
    return x;
}

}  // namespace

TEST_CASE("feature map: degenerate input falls back to bandwidth 1") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Constant(50, 2, 3.25);
    const RbfFeatureMap map = make_feature_map(x, 10, 1);
    CHECK(map.bandwidth == 1.0);
    for (long m = 0; m < map.centres.rows(); ++m) {
        // constant input has zero variance, so standardized rows are all zero
        CHECK(map.centres(m, 0) == 0.0);
        CHECK(map.centres(m, 1) == 0.0);
    }
    CHECK(map.zero_variance_dims == std::vector<int>{0, 1});
    CHECK(map.scale(0) == 1.0);
}

TEST_CASE("feature map: deterministic given seed") {
    const Eigen::MatrixXd x = gaussian_column(300, 17);
    const RbfFeatureMap a = make_feature_map(x, 40, 5);
    const RbfFeatureMap b = make_feature_map(x, 40, 5);
    CHECK(a.centres == b.centres);
    CHECK(a.bandwidth == b.bandwidth);
    const RbfFeatureMap c = make_feature_map(x, 40, 6);
    CHECK(a.centres != c.centres);
}

TEST_CASE("feature map: median-heuristic bandwidth on 1-D gaussian data") {
    const Eigen::MatrixXd x = gaussian_column(1000, 42);
    const RbfFeatureMap map = make_feature_map(x, 100, 5);
    CHECK(map.bandwidth >= 0.8);
    CHECK(map.bandwidth <= 1.6);

    // brute-force oracle: median over every pairwise distance of the full
    // standardized sample lands in the same band
    const double mu = x.mean();
    const double sd = std::sqrt((x.array() - mu).square().mean());
    std::vector<double> d;
    for (long i = 0; i < x.rows(); ++i)
        for (long j = i + 1; j < x.rows(); ++j)
            d.push_back(std::fabs(x(i, 0) - x(j, 0)) / sd);
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    const double med = d[d.size() / 2];
    CHECK(med >= 0.8);
    CHECK(med <= 1.6);
    CHECK(std::fabs(map.bandwidth - med) < 0.2);
}

TEST_CASE("feature map: explicit bandwidth is honored, n_basis validated") {
    const Eigen::MatrixXd x = gaussian_column(100, 3);
    const RbfFeatureMap map = make_feature_map(x, 10, 2.5, 1);
    CHECK(map.bandwidth == 2.5);
    CHECK_THROWS_AS(make_feature_map(x, 0, 1), data_error);
}

TEST_CASE("fit: independent labels under strong penalty recover base rates") {
    const long n = 1000;
    const Eigen::MatrixXd x = gaussian_column(n, 3);
    std::vector<int> a(n);
    for (long i = 0; i < n; ++i) a[i] = i % 10 < 7 ? 1 : 0;  // 70% ones, independent of x
    const RbfFeatureMap map = make_feature_map(x, 100, 11);
    const LogisticModel model = fit_logistic(map, x, a, 2, 10.0);
    const ProbabilityMatrix p = predict_proba(model, x, 1e-6);
    for (long i = 0; i < n; ++i) CHECK(std::fabs(p.probs(i, 1) - 0.7) <= 0.02);
}

TEST_CASE("fit: separable 1-D data is confidently classified") {
    Rng r(8);
    const long n = 200;
    Eigen::MatrixXd s(n, 1);
    std::vector<int> a(n);
    for (long i = 0; i < n; ++i) {
        const double v = r.uniform(0.25, 4.0);
        a[i] = i % 2;
        s(i, 0) = a[i] == 1 ? v : -v;
    }
    const RbfFeatureMap map = make_feature_map(s, 100, 2);
    const LogisticModel model = fit_logistic(map, s, a, 2, 1e-4);
    const ProbabilityMatrix p = predict_proba(model, s, 1e-6);
    for (long i = 0; i < n; ++i) {
        if (s(i, 0) >= 1.0) CHECK(p.probs(i, 1) >= 0.95);
        if (s(i, 0) <= -1.0) CHECK(p.probs(i, 1) <= 0.05);
    }
    Eigen::MatrixXd probe(1, 1);
    probe << 3.0;
    CHECK(predict_proba(model, probe, 1e-6).probs(0, 1) >= 0.95);
}

TEST_CASE("fit: mirror-symmetric data pins the midpoint at one half") {
    // (s, a) <-> (-s, 1-a) symmetric dataset through a symmetric feature map:
    // the unique optimum inherits the symmetry, so u(1|0) = 1/2
    Eigen::MatrixXd s(6, 1);
    s << -3, -2, -1, 1, 2, 3;
    const std::vector<int> a = {0, 0, 0, 1, 1, 1};
    RbfFeatureMap map;
    map.centres = Eigen::MatrixXd(4, 1);
    map.centres << -2, -1, 1, 2;
    map.bandwidth = 1.0;
    map.mean = Eigen::VectorXd::Zero(1);
    map.scale = Eigen::VectorXd::Ones(1);
    const LogisticModel model = fit_logistic(map, s, a, 2, 1e-2);
    Eigen::MatrixXd zero(1, 1);
    zero << 0.0;
    const ProbabilityMatrix p = predict_proba(model, zero, 1e-9);
    CHECK(std::fabs(p.probs(0, 1) - 0.5) <= 1e-6);
}

TEST_CASE("fit: errors on single-class labels") {
    const Eigen::MatrixXd x = gaussian_column(20, 1);
    const std::vector<int> a(20, 1);
    const RbfFeatureMap map = make_feature_map(x, 5, 1);
    CHECK_THROWS_AS(fit_logistic(map, x, a, 2, 1e-2), data_error);
}

TEST_CASE("fit: gradient norm at the optimum is within tolerance") {
    ScenarioSpec spec;
    spec.n = 500;
    const AuditDataset ds = generate(spec);
    const RbfFeatureMap map = make_feature_map(ds.scores, 100, 4);
    const LogisticModel model = fit_logistic(map, ds.scores, ds.sensitive, 2, 1e-3);
    const Eigen::MatrixXd f = featurize(map, ds.scores);
    const Eigen::MatrixXd g = logistic_gradient(f, ds.sensitive, 2, 1e-3, model.weights);
    CHECK(g.norm() <= 1e-6);
}

TEST_CASE("fit: analytic gradient matches central finite differences") {
    Rng r(19);
    const long n = 80;
    Eigen::MatrixXd x(n, 1);
    std::vector<int> a(n);
    for (long i = 0; i < n; ++i) {
        x(i, 0) = r.normal();
        a[i] = r.uniform() < 0.4 + 0.2 * (x(i, 0) > 0) ? 1 : 0;
    }
    const RbfFeatureMap map = make_feature_map(x, 15, 6);
    const Eigen::MatrixXd f = featurize(map, x);
    const int k = 3;  // also exercise the multinomial branch
    std::vector<int> a3 = a;
    for (long i = 0; i < n; i += 5) a3[i] = 2;

    Eigen::MatrixXd w(f.cols(), k - 1);
    for (long i = 0; i < w.rows(); ++i)
        for (long j = 0; j < w.cols(); ++j) w(i, j) = r.normal() * 0.5;

    const double l2 = 1e-2;
    const Eigen::MatrixXd g = logistic_gradient(f, a3, k, l2, w);
    const double h = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd d(w.rows(), w.cols());
        for (long i = 0; i < d.rows(); ++i)
            for (long j = 0; j < d.cols(); ++j) d(i, j) = r.normal();
        d /= d.norm();
        const double fd = (logistic_objective(f, a3, k, l2, w + h * d) -
                           logistic_objective(f, a3, k, l2, w - h * d)) /
                          (2 * h);
        const double an = (g.array() * d.array()).sum();
        CHECK(std::fabs(fd - an) <= 1e-4 * std::max(1.0, std::fabs(an)));
    }
}

TEST_CASE("fit: weight norm never grows with the penalty") {
    const Eigen::MatrixXd x = gaussian_column(300, 23);
    std::vector<int> a(300);
    Rng r(24);
    for (long i = 0; i < 300; ++i) a[i] = r.uniform() < (x(i, 0) > 0 ? 0.8 : 0.3) ? 1 : 0;
    const RbfFeatureMap map = make_feature_map(x, 50, 7);
    double prev = std::numeric_limits<double>::infinity();
    for (double l2 : {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        const LogisticModel model = fit_logistic(map, x, a, 2, l2);
        const double norm = model.weights.topRows(model.weights.rows() - 1).norm();
        CHECK(norm <= prev + 1e-9);
        prev = norm;
    }
}

TEST_CASE("fit: deterministic") {
    const Eigen::MatrixXd x = gaussian_column(200, 31);
    std::vector<int> a(200);
    for (long i = 0; i < 200; ++i) a[i] = i % 3 == 0 ? 1 : 0;
    const RbfFeatureMap map = make_feature_map(x, 30, 2);
    const LogisticModel m1 = fit_logistic(map, x, a, 2, 1e-2);
    const LogisticModel m2 = fit_logistic(map, x, a, 2, 1e-2);
    CHECK(m1.weights == m2.weights);
}

TEST_CASE("predict_proba: zero weights give uniform rows") {
    const Eigen::MatrixXd x = gaussian_column(10, 2);
    const RbfFeatureMap map = make_feature_map(x, 5, 3);
    for (int k : {2, 3, 4}) {
        LogisticModel model;
        model.feature_map = map;
        model.k_classes = k;
        model.weights = Eigen::MatrixXd::Zero(map.centres.rows() + 1, k - 1);
        const ProbabilityMatrix p = predict_proba(model, x, 1e-6);
        for (long i = 0; i < p.probs.rows(); ++i)
            for (int c = 0; c < k; ++c) CHECK(p.probs(i, c) == doctest::Approx(1.0 / k).epsilon(1e-12));
    }
}

TEST_CASE("predict_proba: rows sum to one") {
    Rng r(40);
    const Eigen::MatrixXd x = gaussian_column(50, 41);
    const RbfFeatureMap map = make_feature_map(x, 20, 5);
    for (int k : {2, 3}) {
        LogisticModel model;
        model.feature_map = map;
        model.k_classes = k;
        model.weights = Eigen::MatrixXd(map.centres.rows() + 1, k - 1);
        for (long i = 0; i < model.weights.rows(); ++i)
            for (long j = 0; j < model.weights.cols(); ++j) model.weights(i, j) = r.normal();
        // epsilon small enough that the clamp never binds here
        const ProbabilityMatrix p = predict_proba(model, x, 1e-13);
        for (long i = 0; i < p.probs.rows(); ++i)
            CHECK(std::fabs(p.probs.row(i).sum() - 1.0) <= 1e-12);
    }
}

TEST_CASE("predict_proba: K=2 keeps the exact complement after clamping") {
    const Eigen::MatrixXd x = gaussian_column(100, 51);
    std::vector<int> a(100);
    for (long i = 0; i < 100; ++i) a[i] = x(i, 0) > 0 ? 1 : 0;
    const RbfFeatureMap map = make_feature_map(x, 30, 6);
    const LogisticModel model = fit_logistic(map, x, a, 2, 1e-3);
    const ProbabilityMatrix p = predict_proba(model, x, 1e-4);
    for (long i = 0; i < 100; ++i) {
        CHECK(p.probs(i, 0) + p.probs(i, 1) == 1.0);
        CHECK(p.probs(i, 1) >= 1e-4);
        CHECK(p.probs(i, 1) <= 1.0 - 1e-4);
    }
}

TEST_CASE("predict_proba: epsilon and dimension are validated") {
    const Eigen::MatrixXd x = gaussian_column(10, 61);
    const RbfFeatureMap map = make_feature_map(x, 5, 6);
    const std::vector<int> a = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const LogisticModel model = fit_logistic(map, x, a, 2, 1e-2);
    CHECK_THROWS_AS(predict_proba(model, x, 0.0), data_error);
    CHECK_THROWS_AS(predict_proba(model, x, 0.5), data_error);
    Eigen::MatrixXd wide(3, 2);
    wide.setZero();
    CHECK_THROWS_AS(predict_proba(model, wide, 1e-6), data_error);
}

TEST_CASE("calibration: held-out probabilities are calibrated on a shifted scenario") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::score_mean;
    const AuditDataset ds = generate(spec);
    ClassifierConfig cc;
    const ProbabilityMatrix p = held_out_probs(ds, InputKind::S, 10, 0, cc);

    // 10-bin reliability diagram: mean absolute gap between predicted
    // probability and empirical frequency
    std::vector<std::pair<double, int>> v(ds.n());
    for (long i = 0; i < ds.n(); ++i) v[i] = {p.probs(i, 1), ds.sensitive[i]};
    std::sort(v.begin(), v.end());
    double mace = 0.0;
    const int bins = 10;
    for (int b = 0; b < bins; ++b) {
        const long lo = b * ds.n() / bins, hi = (b + 1) * ds.n() / bins;
        double mean_p = 0.0, frac = 0.0;
        for (long i = lo; i < hi; ++i) {
            mean_p += v[i].first;
            frac += v[i].second;
        }
        mace += std::fabs(mean_p - frac) / static_cast<double>(hi - lo);
    }
    CHECK(mace / bins <= 0.05);
}

TEST_CASE("zero-variance dimension: scale pinned at 1 and recorded") {
    Eigen::MatrixXd x(30, 2);
    Rng r(71);
    for (long i = 0; i < 30; ++i) {
        x(i, 0) = 4.0;  // constant column
        x(i, 1) = r.normal();
    }
    const RbfFeatureMap map = make_feature_map(x, 10, 2);
    CHECK(map.zero_variance_dims == std::vector<int>{0});
    CHECK(map.scale(0) == 1.0);
    CHECK(map.scale(1) > 0.0);
    const Eigen::MatrixXd f = featurize(map, x);
    CHECK(f.allFinite());
}
