#pragma once

#include <span>
#include <vector>

#include "adasurv/types.hpp"

namespace adasurv {

// Event/censoring counts per distinct observed time, in ascending time
// order. at_risk[k] counts records (with multiplicity) whose time is
// >= times[k]; events[k] sums cause_events[.][k] in the competing case.
struct RiskTable {
    std::vector<double> times;
    std::vector<int> events;
    std::vector<int> censorings;
    std::vector<int> at_risk;
    std::vector<int> causes;                        // sorted distinct cause labels
    std::vector<std::vector<int>> cause_events;     // [cause index][time index]

    size_t size() const { return times.size(); }
    int cause_index(int cause) const;               // -1 when absent
};

RiskTable risk_table(std::span<const SurvivalRecord> records);
// Duplicated indices (bootstrap draws) contribute multiply.
RiskTable risk_table(const Dataset& data, std::span<const int> members);

// Product-limit event-free survival; jumps at event times only.
SurvivalCurve kaplan_meier(const RiskTable& table);

// All-cause cumulative hazard, sum of d/Y over event times.
SurvivalCurve nelson_aalen(const RiskTable& table);

// Cause-specific cumulative hazard, sum of d_j/Y; jumps where d_j > 0.
SurvivalCurve cause_specific_chf(const RiskTable& table, int cause);

// Cumulative incidence, sum of S(t_{k-1}) * d_j(t_k)/Y(t_k) with S the
// all-cause Kaplan-Meier left limit; jumps where d_j > 0.
SurvivalCurve aalen_johansen(const RiskTable& table, int cause);

}  // namespace adasurv
