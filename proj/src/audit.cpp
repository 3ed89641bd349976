#include "fairaudit/audit.hpp"

#include <cmath>
#include <cstdio>

#include "fairaudit/crossval.hpp"
#include "fairaudit/estimators.hpp"

namespace fairaudit {

static std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

FairnessReport run_audit(const AuditDataset& ds, const AuditConfig& config) {
    FairnessReport report;
    report.n = ds.n();
    report.k_classes = ds.k_classes;

    const GroupCounts counts = group_counts(ds);
    const ClassifierConfig cc{config.n_basis, config.l2_strength, config.clamp_epsilon};

    if (ds.k_classes > 2)
        report.diagnostics.push_back(
            "ratio measures unavailable: sensitive attribute has " +
            std::to_string(ds.k_classes) + " classes (density ratios are binary-only)");

    const ProbabilityMatrix probs_s = held_out_probs(ds, InputKind::S, config.n_folds, config.seed,
                                                     cc, config.held_in, &report.diagnostics);
    const ProbabilityMatrix probs_y = held_out_probs(ds, InputKind::Y, config.n_folds, config.seed,
                                                     cc, config.held_in, &report.diagnostics);
    const ProbabilityMatrix probs_ys = held_out_probs(ds, InputKind::YS, config.n_folds, config.seed,
                                                      cc, config.held_in, &report.diagnostics);

    report.balanced_accuracy_s = balanced_accuracy(probs_s, ds.sensitive);
    report.balanced_accuracy_y = balanced_accuracy(probs_y, ds.sensitive);
    report.balanced_accuracy_ys = balanced_accuracy(probs_ys, ds.sensitive);

    if (ds.k_classes == 2) {
        const RatioMeasures rm = compute_ratio_measures(probs_s, probs_y, probs_ys, counts);
        report.ratio_ind = rm.a_ind;
        report.ratio_sep = rm.a_sep;
        report.ratio_suf = rm.a_suf;
        const struct { const char* name; double share; } shares[] = {
            {"ratio_ind", rm.share_ind}, {"ratio_sep", rm.share_sep}, {"ratio_suf", rm.share_suf}};
        for (const auto& s : shares)
            if (s.share > 0.5)
                report.diagnostics.push_back(std::string(s.name) + ": a single instance contributes " +
                                             fmt("%.4g", s.share * 100.0) +
                                             "% of the estimator sum; the estimate is dominated");
    }

    const MiMeasures mm = compute_mi_measures(probs_s, probs_y, probs_ys, ds.sensitive, counts);
    report.nmi_ind = mm.nmi_ind;
    report.nmi_sep = mm.nmi_sep;
    report.nmi_suf = mm.nmi_suf;

    if (!report.nmi_sep)
        report.diagnostics.push_back("nmi_sep undefined: conditional entropy H(A|Y) is below 1e-9");
    if (!report.nmi_suf)
        report.diagnostics.push_back("nmi_suf undefined: conditional entropy H(A|S) is below 1e-9");

    const struct { const char* name; const double* value; } nmis[] = {
        {"nmi_ind", &report.nmi_ind},
        {"nmi_sep", report.nmi_sep ? &*report.nmi_sep : nullptr},
        {"nmi_suf", report.nmi_suf ? &*report.nmi_suf : nullptr}};
    for (const auto& e : nmis)
        if (e.value && *e.value < 0.0)
            report.diagnostics.push_back(std::string(e.name) + " = " + fmt("%.4g", *e.value) +
                                         " is slightly negative; small negative values are "
                                         "estimation artefacts of held-out probabilities");

    if (config.clamp_negative_nmi) {
        auto clamp_field = [&](const char* name, double& v) {
            if (v < 0.0) {
                report.diagnostics.push_back(std::string(name) + " clamped to 0 for presentation (raw " +
                                             fmt("%.4g", v) + ")");
                v = 0.0;
            }
        };
        clamp_field("nmi_ind", report.nmi_ind);
        if (report.nmi_sep) clamp_field("nmi_sep", *report.nmi_sep);
        if (report.nmi_suf) clamp_field("nmi_suf", *report.nmi_suf);
    }

    return report;
}

}  // namespace fairaudit
