#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace adasurv {

enum class Status : uint8_t { Censored = 0, Event = 1 };

// One observation. `cause` is 0 for censored records and for datasets
// without competing risks; event records in a competing-risk dataset carry
// exactly one cause label > 0.
struct SurvivalRecord {
    std::vector<double> covariates;
    double time = 0.0;
    Status status = Status::Censored;
    int cause = 0;

    bool is_event() const { return status == Status::Event; }
};

struct Dataset {
    std::vector<SurvivalRecord> records;
    std::vector<std::string> feature_names;
    bool competing_risk = false;
    std::vector<int> causes;  // sorted distinct cause labels, competing-risk only

    size_t size() const { return records.size(); }
    size_t num_features() const { return feature_names.size(); }
};

enum class CurveKind { Survival, CumulativeHazard, CumulativeIncidence };

// Right-continuous step function over strictly increasing jump times.
// Before the first jump a survival curve is 1, the hazard and incidence
// kinds are 0.
struct SurvivalCurve {
    CurveKind kind = CurveKind::Survival;
    std::vector<double> times;
    std::vector<double> values;

    double initial_value() const { return kind == CurveKind::Survival ? 1.0 : 0.0; }

    double at(double t) const {
        // last jump time <= t
        int lo = 0, hi = static_cast<int>(times.size()) - 1, idx = -1;
        while (lo <= hi) {
            int mid = (lo + hi) / 2;
            if (times[mid] <= t) {
                idx = mid;
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        return idx < 0 ? initial_value() : values[idx];
    }
};

enum class Method { Rsf, Esf, AdaRsf, AdaEsf, AdaMix };
enum class Aggregation { MeanOfMode, MappedMeanOfMode };

const char* method_name(Method m);
const char* aggregation_name(Aggregation a);
Method parse_method(const std::string& name);          // throws ConfigError
Aggregation parse_aggregation(const std::string& name); // throws ConfigError

inline bool is_boosted(Method m) {
    return m == Method::AdaRsf || m == Method::AdaEsf || m == Method::AdaMix;
}

}  // namespace adasurv
