#include "fairaudit/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairaudit/rng.hpp"

namespace fairaudit {

static RbfFeatureMap standardize_and_centres(const Eigen::MatrixXd& inputs, int n_basis,
                                             Rng& rng) {
    if (n_basis < 1) throw data_error("n_basis must be >= 1");
    if (inputs.rows() < 1) throw data_error("feature map needs at least one input row");
    const long n = inputs.rows();
    const long d = inputs.cols();

    RbfFeatureMap map;
    map.mean = inputs.colwise().mean();
    map.scale.resize(d);
    for (long j = 0; j < d; ++j) {
        const double var = (inputs.col(j).array() - map.mean(j)).square().sum() / static_cast<double>(n);
        const double sd = std::sqrt(var);
        if (sd < 1e-12) {
            map.scale(j) = 1.0;  // degenerate dimension; flagged, not fatal
            map.zero_variance_dims.push_back(static_cast<int>(j));
        } else {
            map.scale(j) = sd;
        }
    }

    map.centres.resize(n_basis, d);
    for (int m = 0; m < n_basis; ++m) {
        const long i = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(n)));
        map.centres.row(m) = (inputs.row(i) - map.mean.transpose()).array() / map.scale.transpose().array();
    }
    return map;
}

static double median_pairwise_distance(const Eigen::MatrixXd& inputs, const RbfFeatureMap& map,
                                       Rng& rng) {
    const long n = inputs.rows();
    std::vector<long> idx(n);
    std::iota(idx.begin(), idx.end(), 0L);
    if (n > 500) {
        rng.shuffle(idx);
        idx.resize(500);
    }
    const long m = static_cast<long>(idx.size());
    if (m < 2) return 1.0;

    Eigen::MatrixXd z(m, inputs.cols());
    for (long r = 0; r < m; ++r)
        z.row(r) = (inputs.row(idx[r]) - map.mean.transpose()).array() / map.scale.transpose().array();

    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (long i = 0; i < m; ++i)
        for (long j = i + 1; j < m; ++j) dist.push_back((z.row(i) - z.row(j)).norm());

    std::sort(dist.begin(), dist.end());
    const std::size_t cnt = dist.size();
    double med = (cnt % 2 == 1) ? dist[cnt / 2] : 0.5 * (dist[cnt / 2 - 1] + dist[cnt / 2]);
    if (med <= 0.0) med = 1.0;  // all points identical
    return med;
}

RbfFeatureMap make_feature_map(const Eigen::MatrixXd& inputs, int n_basis, std::uint64_t seed) {
    Rng rng(seed);
    RbfFeatureMap map = standardize_and_centres(inputs, n_basis, rng);
    map.bandwidth = median_pairwise_distance(inputs, map, rng);
    return map;
}

RbfFeatureMap make_feature_map(const Eigen::MatrixXd& inputs, int n_basis, double bandwidth,
                               std::uint64_t seed) {
    if (!(bandwidth > 0.0)) throw data_error("bandwidth must be positive");
    Rng rng(seed);
    RbfFeatureMap map = standardize_and_centres(inputs, n_basis, rng);
    map.bandwidth = bandwidth;
    return map;
}

Eigen::MatrixXd featurize(const RbfFeatureMap& map, const Eigen::MatrixXd& inputs) {
    if (inputs.cols() != map.centres.cols())
        throw data_error("input dimension " + std::to_string(inputs.cols()) +
                         " does not match the feature map's " + std::to_string(map.centres.cols()));
    const long n = inputs.rows();
    const long m = map.centres.rows();
    Eigen::MatrixXd z = (inputs.rowwise() - map.mean.transpose()).array().rowwise() /
                        map.scale.transpose().array();

    Eigen::MatrixXd features(n, m + (map.include_bias ? 1 : 0));
    const double inv = -1.0 / (2.0 * map.bandwidth * map.bandwidth);
    for (long c = 0; c < m; ++c)
        features.col(c) =
            ((z.rowwise() - map.centres.row(c)).rowwise().squaredNorm() * inv).array().exp();
    if (map.include_bias) features.col(m).setOnes();
    return features;
}

// row-wise softmax with an implicit zero column for the reference class;
// returns N x (K-1) probabilities for classes 1..K-1 and fills p0
static Eigen::MatrixXd softmax_tail(const Eigen::MatrixXd& scores, Eigen::VectorXd& p0) {
    const long n = scores.rows();
    const long km1 = scores.cols();
    Eigen::MatrixXd p(n, km1);
    p0.resize(n);
    for (long i = 0; i < n; ++i) {
        double mx = 0.0;
        for (long k = 0; k < km1; ++k) mx = std::max(mx, scores(i, k));
        double denom = std::exp(-mx);
        for (long k = 0; k < km1; ++k) denom += std::exp(scores(i, k) - mx);
        p0(i) = std::exp(-mx) / denom;
        for (long k = 0; k < km1; ++k) p(i, k) = std::exp(scores(i, k) - mx) / denom;
    }
    return p;
}

double logistic_objective(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                          int k_classes, double l2_strength, const Eigen::MatrixXd& weights) {
    const long n = features.rows();
    const Eigen::MatrixXd scores = features * weights;
    double loss = 0.0;
    for (long i = 0; i < n; ++i) {
        double mx = 0.0;
        for (long k = 0; k < k_classes - 1; ++k) mx = std::max(mx, scores(i, k));
        double denom = std::exp(-mx);
        for (long k = 0; k < k_classes - 1; ++k) denom += std::exp(scores(i, k) - mx);
        const double z = labels[i] == 0 ? 0.0 : scores(i, labels[i] - 1);
        loss -= z - mx - std::log(denom);
    }
    loss /= static_cast<double>(n);
    // bias row (the last) is unpenalized
    loss += 0.5 * l2_strength * weights.topRows(weights.rows() - 1).squaredNorm();
    return loss;
}

Eigen::MatrixXd logistic_gradient(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                                  int k_classes, double l2_strength,
                                  const Eigen::MatrixXd& weights) {
    if (weights.cols() != k_classes - 1) throw data_error("weight shape does not match k_classes");
    const long n = features.rows();
    Eigen::VectorXd p0;
    Eigen::MatrixXd p = softmax_tail(features * weights, p0);
    for (long i = 0; i < n; ++i)
        if (labels[i] > 0) p(i, labels[i] - 1) -= 1.0;
    Eigen::MatrixXd grad = features.transpose() * p / static_cast<double>(n);
    grad.topRows(grad.rows() - 1) += l2_strength * weights.topRows(weights.rows() - 1);
    return grad;
}

LogisticModel fit_logistic(const RbfFeatureMap& map, const Eigen::MatrixXd& inputs,
                           const std::vector<int>& labels, int k_classes, double l2_strength) {
    if (k_classes < 2) throw data_error("need at least two classes");
    if (static_cast<long>(labels.size()) != inputs.rows())
        throw data_error("labels and inputs misaligned");
    std::vector<long> present(k_classes, 0);
    for (int a : labels) {
        if (a < 0 || a >= k_classes) throw data_error("label out of range");
        ++present[a];
    }
    for (int k = 0; k < k_classes; ++k)
        if (present[k] == 0) throw data_error("class " + std::to_string(k) + " absent from labels");
    if (l2_strength < 0.0) throw data_error("l2_strength must be >= 0");

    const Eigen::MatrixXd features = featurize(map, inputs);
    if (!features.allFinite()) throw data_error("non-finite features");

    const long n = features.rows();
    const long d = features.cols();
    const long km1 = k_classes - 1;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, km1);

    double f = logistic_objective(features, labels, k_classes, l2_strength, w);
    for (int iter = 0; iter < 500; ++iter) {
        const Eigen::MatrixXd grad = logistic_gradient(features, labels, k_classes, l2_strength, w);
        if (grad.norm() <= 1e-6) break;

        Eigen::VectorXd p0;
        const Eigen::MatrixXd p = softmax_tail(features * w, p0);

        // block Hessian over the flattened (column-major) weight vector
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d * km1, d * km1);
        for (long a = 0; a < km1; ++a) {
            for (long b = a; b < km1; ++b) {
                Eigen::VectorXd wvec =
                    (a == b) ? (p.col(a).array() * (1.0 - p.col(a).array())).matrix().eval()
                             : (-p.col(a).array() * p.col(b).array()).matrix().eval();
                const Eigen::MatrixXd block =
                    features.transpose() * wvec.asDiagonal() * features / static_cast<double>(n);
                hess.block(a * d, b * d, d, d) = block;
                if (a != b) hess.block(b * d, a * d, d, d) = block;
            }
            for (long r = 0; r + 1 < d; ++r) hess(a * d + r, a * d + r) += l2_strength;
        }
        hess.diagonal().array() += 1e-12;  // keeps the solve stable when features are degenerate

        const Eigen::Map<const Eigen::VectorXd> gvec(grad.data(), d * km1);
        Eigen::VectorXd step = hess.ldlt().solve(-gvec);
        double gd = gvec.dot(step);
        if (!step.allFinite() || gd >= 0.0) {  // fallback to steepest descent
            step = -gvec;
            gd = -gvec.squaredNorm();
        }
        const Eigen::Map<const Eigen::MatrixXd> dir(step.data(), d, km1);

        double t = 1.0;
        double fnew = f;
        for (int h = 0; h < 60; ++h) {
            fnew = logistic_objective(features, labels, k_classes, l2_strength, w + t * dir);
            if (fnew <= f + 1e-4 * t * gd) break;
            t *= 0.5;
        }
        w += t * dir;
        f = fnew;
    }

    LogisticModel model;
    model.feature_map = map;
    model.weights = std::move(w);
    model.l2_strength = l2_strength;
    model.k_classes = k_classes;
    if (!model.weights.allFinite()) throw numerical_error("logistic fit produced non-finite weights");
    return model;
}

ProbabilityMatrix predict_proba(const LogisticModel& model, const Eigen::MatrixXd& inputs,
                                double clamp_epsilon) {
    if (!(clamp_epsilon > 0.0) || clamp_epsilon >= 0.5)
        throw data_error("clamp_epsilon must be in (0, 0.5)");
    const Eigen::MatrixXd features = featurize(model.feature_map, inputs);
    const Eigen::MatrixXd scores = features * model.weights;
    const long n = inputs.rows();
    const int k = model.k_classes;

    ProbabilityMatrix out;
    out.clamp_epsilon = clamp_epsilon;
    out.probs.resize(n, k);

    if (k == 2) {
        for (long i = 0; i < n; ++i) {
            const double z = scores(i, 0);
            // stable sigmoid; complement is exact by construction
            double p1 = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                                 : std::exp(z) / (1.0 + std::exp(z));
            p1 = std::clamp(p1, clamp_epsilon, 1.0 - clamp_epsilon);
            out.probs(i, 1) = p1;
            out.probs(i, 0) = 1.0 - p1;
        }
        return out;
    }

    Eigen::VectorXd p0;
    const Eigen::MatrixXd tail = softmax_tail(scores, p0);
    for (long i = 0; i < n; ++i) {
        out.probs(i, 0) = p0(i);
        for (int c = 1; c < k; ++c) out.probs(i, c) = tail(i, c - 1);
        double sum = 0.0;
        for (int c = 0; c < k; ++c) {
            out.probs(i, c) = std::clamp(out.probs(i, c), clamp_epsilon, 1.0 - clamp_epsilon);
            sum += out.probs(i, c);
        }
        for (int c = 0; c < k; ++c) {
            out.probs(i, c) /= sum;
            out.probs(i, c) = std::clamp(out.probs(i, c), clamp_epsilon, 1.0 - clamp_epsilon);
        }
    }
    return out;
}

}  // namespace fairaudit
