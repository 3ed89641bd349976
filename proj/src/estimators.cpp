#include "fairaudit/estimators.hpp"

#include <cmath>

namespace fairaudit {

// Neumaier compensated accumulator; keeps the exact identities exact at N~1e3
namespace {
struct Accum {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

void require_binary(const ProbabilityMatrix& probs, const char* what) {
    if (probs.probs.cols() != 2)
        throw data_error(std::string(what) + " is defined for binary sensitive attributes only");
}

void require_aligned(const ProbabilityMatrix& a, const ProbabilityMatrix& b) {
    if (a.probs.rows() != b.probs.rows())
        throw data_error("probability matrices are misaligned");
}
}  // namespace

RatioResult ratio_ind(const ProbabilityMatrix& probs_s, const GroupCounts& counts) {
    require_binary(probs_s, "ratio_ind");
    if (counts.counts.size() != 2)
        throw data_error("ratio_ind needs binary group counts");
    const long n = probs_s.probs.rows();
    Accum acc;
    double max_term = 0.0;
    for (long i = 0; i < n; ++i) {
        const double term = probs_s.probs(i, 1) / (1.0 - probs_s.probs(i, 1));
        acc.add(term);
        max_term = std::max(max_term, term);
    }
    const double sum = acc.value();
    RatioResult r;
    r.value = static_cast<double>(counts.counts[0]) /
              (static_cast<double>(counts.counts[1]) * static_cast<double>(counts.total)) * sum;
    r.max_term_share = sum > 0.0 ? max_term / sum : 0.0;
    return r;
}

static RatioResult ratio_conditional(const ProbabilityMatrix& probs_ys,
                                     const ProbabilityMatrix& probs_marginal) {
    require_binary(probs_ys, "conditional ratio");
    require_binary(probs_marginal, "conditional ratio");
    require_aligned(probs_ys, probs_marginal);
    const long n = probs_ys.probs.rows();
    Accum acc;
    double max_term = 0.0;
    for (long i = 0; i < n; ++i) {
        const double term = (probs_ys.probs(i, 1) / probs_ys.probs(i, 0)) *
                            (probs_marginal.probs(i, 0) / probs_marginal.probs(i, 1));
        acc.add(term);
        max_term = std::max(max_term, term);
    }
    const double sum = acc.value();
    RatioResult r;
    r.value = sum / static_cast<double>(n);
    r.max_term_share = sum > 0.0 ? max_term / sum : 0.0;
    return r;
}

RatioResult ratio_sep(const ProbabilityMatrix& probs_ys, const ProbabilityMatrix& probs_y) {
    return ratio_conditional(probs_ys, probs_y);
}

RatioResult ratio_suf(const ProbabilityMatrix& probs_ys, const ProbabilityMatrix& probs_s) {
    return ratio_conditional(probs_ys, probs_s);
}

RatioMeasures compute_ratio_measures(const ProbabilityMatrix& probs_s,
                                     const ProbabilityMatrix& probs_y,
                                     const ProbabilityMatrix& probs_ys,
                                     const GroupCounts& counts) {
    RatioMeasures m;
    const RatioResult ri = ratio_ind(probs_s, counts);
    const RatioResult rs = ratio_sep(probs_ys, probs_y);
    const RatioResult ru = ratio_suf(probs_ys, probs_s);
    m.a_ind = ri.value;
    m.a_sep = rs.value;
    m.a_suf = ru.value;
    m.share_ind = ri.max_term_share;
    m.share_sep = rs.max_term_share;
    m.share_suf = ru.max_term_share;
    m.dominated_fraction = std::max({m.share_ind, m.share_sep, m.share_suf});
    return m;
}

double entropy(const GroupCounts& counts) {
    Accum acc;
    for (long c : counts.counts) {
        const double p = static_cast<double>(c) / static_cast<double>(counts.total);
        acc.add(-p * std::log(p));
    }
    return acc.value();
}

double mi_ind(const ProbabilityMatrix& probs_s, const std::vector<int>& labels,
              const GroupCounts& counts) {
    const long n = probs_s.probs.rows();
    if (n != static_cast<long>(labels.size())) throw data_error("labels misaligned");
    std::vector<double> base(counts.counts.size());
    for (std::size_t a = 0; a < base.size(); ++a)
        base[a] = static_cast<double>(counts.counts[a]) / static_cast<double>(counts.total);
    Accum acc;
    for (long i = 0; i < n; ++i) acc.add(std::log(probs_s.probs(i, labels[i]) / base[labels[i]]));
    return acc.value() / static_cast<double>(n);
}

double cond_entropy(const ProbabilityMatrix& probs, const std::vector<int>& labels) {
    const long n = probs.probs.rows();
    if (n != static_cast<long>(labels.size())) throw data_error("labels misaligned");
    Accum acc;
    for (long i = 0; i < n; ++i) acc.add(-std::log(probs.probs(i, labels[i])));
    return acc.value() / static_cast<double>(n);
}

double cmi(const ProbabilityMatrix& probs_num, const ProbabilityMatrix& probs_den,
           const std::vector<int>& labels) {
    require_aligned(probs_num, probs_den);
    const long n = probs_num.probs.rows();
    if (n != static_cast<long>(labels.size())) throw data_error("labels misaligned");
    Accum acc;
    for (long i = 0; i < n; ++i)
        acc.add(std::log(probs_num.probs(i, labels[i]) / probs_den.probs(i, labels[i])));
    return acc.value() / static_cast<double>(n);
}

double nmi_ind(double mi, double entropy_a) {
    if (!(entropy_a > 0.0)) throw data_error("entropy normalizer must be positive");
    return mi / entropy_a;
}

static std::optional<double> nmi_cond(double cmi_value, double normalizer) {
    if (normalizer <= 1e-9) return std::nullopt;
    return cmi_value / normalizer;
}

std::optional<double> nmi_sep(double cmi_value, double cond_entropy_a_given_y) {
    return nmi_cond(cmi_value, cond_entropy_a_given_y);
}

std::optional<double> nmi_suf(double cmi_value, double cond_entropy_a_given_s) {
    return nmi_cond(cmi_value, cond_entropy_a_given_s);
}

MiMeasures compute_mi_measures(const ProbabilityMatrix& probs_s, const ProbabilityMatrix& probs_y,
                               const ProbabilityMatrix& probs_ys, const std::vector<int>& labels,
                               const GroupCounts& counts) {
    MiMeasures m;
    m.entropy_a = entropy(counts);
    m.cond_entropy_a_given_y = cond_entropy(probs_y, labels);
    m.cond_entropy_a_given_s = cond_entropy(probs_s, labels);
    m.mi_ind = mi_ind(probs_s, labels, counts);
    m.cmi_sep = cmi(probs_ys, probs_y, labels);
    m.cmi_suf = cmi(probs_ys, probs_s, labels);
    m.nmi_ind = nmi_ind(m.mi_ind, m.entropy_a);
    m.nmi_sep = nmi_sep(m.cmi_sep, m.cond_entropy_a_given_y);
    m.nmi_suf = nmi_suf(m.cmi_suf, m.cond_entropy_a_given_s);
    return m;
}

}  // namespace fairaudit
