#pragma once

#include <vector>

#include "adasurv/rng.hpp"
#include "adasurv/types.hpp"
#include "oracles.hpp"

namespace testutil {

inline adasurv::SurvivalRecord rec(double time, bool event, std::vector<double> covariates = {},
                                   int cause = 0) {
    adasurv::SurvivalRecord r;
    r.covariates = std::move(covariates);
    r.time = time;
    r.status = event ? adasurv::Status::Event : adasurv::Status::Censored;
    r.cause = cause;
    return r;
}

inline adasurv::Dataset make_dataset(std::vector<adasurv::SurvivalRecord> records,
                                     std::vector<std::string> feature_names = {},
                                     std::vector<int> causes = {}) {
    adasurv::Dataset d;
    d.records = std::move(records);
    d.feature_names = std::move(feature_names);
    d.causes = std::move(causes);
    d.competing_risk = !d.causes.empty();
    return d;
}

inline std::vector<oracle::Obs> to_obs(const adasurv::Dataset& data) {
    std::vector<oracle::Obs> obs;
    obs.reserve(data.records.size());
    for (const auto& r : data.records) obs.push_back({r.time, r.is_event(), r.cause});
    return obs;
}

// Small random instance with tie-prone times on a coarse grid.
inline adasurv::Dataset random_survival_data(adasurv::Rng& rng, int n, int p, int num_causes,
                                             double censor_prob = 0.35) {
    std::vector<adasurv::SurvivalRecord> records;
    records.reserve(n);
    bool any_event = false;
    for (int i = 0; i < n; ++i) {
        std::vector<double> x(p);
        for (int j = 0; j < p; ++j) x[j] = rng.next_below(10);
        double t = 0.5 * (1 + rng.next_below(12));
        bool event = rng.next_unit() >= censor_prob;
        if (i == n - 1 && !any_event) event = true;
        any_event = any_event || event;
        int cause = (event && num_causes > 0) ? 1 + rng.next_below(num_causes) : 0;
        records.push_back(rec(t, event, std::move(x), cause));
    }
    std::vector<std::string> names;
    for (int j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
    std::vector<int> causes;
    for (int c = 1; c <= num_causes; ++c) causes.push_back(c);
    return make_dataset(std::move(records), std::move(names), std::move(causes));
}

inline bool curve_monotone(const adasurv::SurvivalCurve& curve) {
    using adasurv::CurveKind;
    double prev = curve.initial_value();
    for (double v : curve.values) {
        if (curve.kind == CurveKind::Survival) {
            if (v > prev + 1e-12 || v < -1e-12 || v > 1.0 + 1e-12) return false;
        } else {
            if (v < prev - 1e-12) return false;
        }
        prev = v;
    }
    return true;
}

}  // namespace testutil
