#pragma once
#include <optional>
#include <vector>

#include "fairaudit/classifier.hpp"
#include "fairaudit/dataset.hpp"

namespace fairaudit {

// density-ratio estimate plus the largest single-term share of its sum;
// a share above 0.5 means one instance dominates the estimate.
struct RatioResult {
    double value = 0.0;
    double max_term_share = 0.0;
};

// (N0 / (N1 N)) sum_i u(1|s_i) / (1 - u(1|s_i)); binary A only
RatioResult ratio_ind(const ProbabilityMatrix& probs_s, const GroupCounts& counts);
// (1/N) sum_i [u(1|y_i,s_i)/u(0|y_i,s_i)] [u(0|y_i)/u(1|y_i)]
RatioResult ratio_sep(const ProbabilityMatrix& probs_ys, const ProbabilityMatrix& probs_y);
// same with the marginal classifier on S
RatioResult ratio_suf(const ProbabilityMatrix& probs_ys, const ProbabilityMatrix& probs_s);

struct RatioMeasures {
    double a_ind = 0.0, a_sep = 0.0, a_suf = 0.0;
    double share_ind = 0.0, share_sep = 0.0, share_suf = 0.0;
    double dominated_fraction = 0.0;  // max of the three shares
};

RatioMeasures compute_ratio_measures(const ProbabilityMatrix& probs_s,
                                     const ProbabilityMatrix& probs_y,
                                     const ProbabilityMatrix& probs_ys,
                                     const GroupCounts& counts);

// all in nats
double entropy(const GroupCounts& counts);
// (1/N) sum_i log[ u(a_i|s_i) / (N_{a_i}/N) ]
double mi_ind(const ProbabilityMatrix& probs_s, const std::vector<int>& labels,
              const GroupCounts& counts);
// -(1/N) sum_i log u(a_i|.)
double cond_entropy(const ProbabilityMatrix& probs, const std::vector<int>& labels);
// (1/N) sum_i log[ num(a_i) / den(a_i) ]
double cmi(const ProbabilityMatrix& probs_num, const ProbabilityMatrix& probs_den,
           const std::vector<int>& labels);

double nmi_ind(double mi, double entropy_a);
// empty when the normalizer is <= 1e-9 (the measure is undefined there)
std::optional<double> nmi_sep(double cmi_value, double cond_entropy_a_given_y);
std::optional<double> nmi_suf(double cmi_value, double cond_entropy_a_given_s);

struct MiMeasures {
    double entropy_a = 0.0;
    double cond_entropy_a_given_y = 0.0;
    double cond_entropy_a_given_s = 0.0;
    double mi_ind = 0.0, cmi_sep = 0.0, cmi_suf = 0.0;
    double nmi_ind = 0.0;
    std::optional<double> nmi_sep, nmi_suf;
};

MiMeasures compute_mi_measures(const ProbabilityMatrix& probs_s,
                               const ProbabilityMatrix& probs_y,
                               const ProbabilityMatrix& probs_ys,
                               const std::vector<int>& labels,
                               const GroupCounts& counts);

}  // namespace fairaudit
