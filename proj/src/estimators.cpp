#include "adasurv/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "adasurv/error.hpp"

namespace adasurv {

namespace {

struct Item {
    double time;
    bool event;
    int cause;
};

RiskTable build_table(std::vector<Item> items, const std::vector<int>& declared_causes) {
    if (items.empty()) throw DomainError("risk_table: empty record set");
    for (const auto& it : items) {
        if (!(it.time > 0.0) || !std::isfinite(it.time))
            throw DomainError("risk_table: observed times must be positive and finite");
    }
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.time < b.time; });

    std::set<int> cause_set(declared_causes.begin(), declared_causes.end());
    for (const auto& it : items)
        if (it.event && it.cause > 0) cause_set.insert(it.cause);

    RiskTable table;
    table.causes.assign(cause_set.begin(), cause_set.end());
    table.cause_events.assign(table.causes.size(), {});

    const size_t n = items.size();
    int remaining = static_cast<int>(n);
    size_t i = 0;
    while (i < n) {
        const double t = items[i].time;
        int d = 0, c = 0;
        std::vector<int> dj(table.causes.size(), 0);
        size_t j = i;
        for (; j < n && items[j].time == t; ++j) {
            if (items[j].event) {
                ++d;
                if (items[j].cause > 0) ++dj[table.cause_index(items[j].cause)];
            } else {
                ++c;
            }
        }
        table.times.push_back(t);
        table.events.push_back(d);
        table.censorings.push_back(c);
        table.at_risk.push_back(remaining);
        for (size_t k = 0; k < dj.size(); ++k) table.cause_events[k].push_back(dj[k]);
        remaining -= static_cast<int>(j - i);
        i = j;
    }
    return table;
}

int require_cause(const RiskTable& table, int cause, const char* op) {
    const int idx = table.cause_index(cause);
    if (idx < 0)
        throw DomainError(std::string(op) + ": cause " + std::to_string(cause) +
                          " not present in the risk table");
    return idx;
}

}  // namespace

int RiskTable::cause_index(int cause) const {
    auto it = std::lower_bound(causes.begin(), causes.end(), cause);
    if (it == causes.end() || *it != cause) return -1;
    return static_cast<int>(it - causes.begin());
}

RiskTable risk_table(std::span<const SurvivalRecord> records) {
    std::vector<Item> items;
    items.reserve(records.size());
    for (const auto& r : records) items.push_back({r.time, r.is_event(), r.cause});
    return build_table(std::move(items), {});
}

RiskTable risk_table(const Dataset& data, std::span<const int> members) {
    std::vector<Item> items;
    items.reserve(members.size());
    for (int m : members) {
        if (m < 0 || static_cast<size_t>(m) >= data.size())
            throw DomainError("risk_table: member index out of range");
        const auto& r = data.records[m];
        items.push_back({r.time, r.is_event(), r.cause});
    }
    return build_table(std::move(items), data.causes);
}

SurvivalCurve kaplan_meier(const RiskTable& table) {
    SurvivalCurve curve;
    curve.kind = CurveKind::Survival;
    double s = 1.0;
    for (size_t k = 0; k < table.size(); ++k) {
        if (table.events[k] == 0) continue;
        s *= 1.0 - static_cast<double>(table.events[k]) / table.at_risk[k];
        curve.times.push_back(table.times[k]);
        curve.values.push_back(s);
    }
    return curve;
}

SurvivalCurve nelson_aalen(const RiskTable& table) {
    SurvivalCurve curve;
    curve.kind = CurveKind::CumulativeHazard;
    double h = 0.0;
    for (size_t k = 0; k < table.size(); ++k) {
        if (table.events[k] == 0) continue;
        h += static_cast<double>(table.events[k]) / table.at_risk[k];
        curve.times.push_back(table.times[k]);
        curve.values.push_back(h);
    }
    return curve;
}

SurvivalCurve cause_specific_chf(const RiskTable& table, int cause) {
    const int idx = require_cause(table, cause, "cause_specific_chf");
    SurvivalCurve curve;
    curve.kind = CurveKind::CumulativeHazard;
    double h = 0.0;
    for (size_t k = 0; k < table.size(); ++k) {
        const int dj = table.cause_events[idx][k];
        if (dj == 0) continue;
        h += static_cast<double>(dj) / table.at_risk[k];
        curve.times.push_back(table.times[k]);
        curve.values.push_back(h);
    }
    return curve;
}

SurvivalCurve aalen_johansen(const RiskTable& table, int cause) {
    const int idx = require_cause(table, cause, "aalen_johansen");
    SurvivalCurve curve;
    curve.kind = CurveKind::CumulativeIncidence;
    double f = 0.0;
    double s_prev = 1.0;  // all-cause survival left limit
    for (size_t k = 0; k < table.size(); ++k) {
        if (table.events[k] == 0) continue;
        const int dj = table.cause_events[idx][k];
        if (dj > 0) {
            f += s_prev * static_cast<double>(dj) / table.at_risk[k];
            curve.times.push_back(table.times[k]);
            curve.values.push_back(f);
        }
        s_prev *= 1.0 - static_cast<double>(table.events[k]) / table.at_risk[k];
    }
    return curve;
}

}  // namespace adasurv
