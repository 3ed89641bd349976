#pragma once
#include <array>
#include <cstdint>
#include <string>

#include "fairaudit/audit.hpp"
#include "fairaudit/dataset.hpp"

namespace fairaudit {

enum class ScenarioKind { fair, score_mean, target_mean, score_variance };

ScenarioKind scenario_from_name(const std::string& name);  // data_error on unknown
const char* scenario_name(ScenarioKind kind);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::fair;
    long n = 1000;
    double p_a1 = 0.7;
    std::uint64_t seed = 0;
};

// y ~ U(-10, 10), a ~ Bernoulli(p_a1), score built per kind:
//   fair:           s = y + 1.5 z
//   score_mean:     s = y - 4 + 1.5 z (a=1), y + 4 + 1.5 z (a=0)
//   target_mean:    s = y + 1.5 z from the pre-offset target, then the
//                   returned target is y + 4 (a=0) or y - 4 (a=1)
//   score_variance: s = y + 6 z (a=0), y + 1.5 z (a=1)
// with z ~ N(0,1). y, a and z come from separate seed-derived streams.
AuditDataset generate(const ScenarioSpec& spec);

// the four scenarios audited with the same config, in the order
// fair, score_mean, target_mean, score_variance
std::array<FairnessReport, 4> scenario_table(std::uint64_t seed,
                                             const AuditConfig& config);

}  // namespace fairaudit
