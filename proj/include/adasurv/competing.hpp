#pragma once

#include <optional>
#include <vector>

#include "adasurv/boosting.hpp"
#include "adasurv/forest.hpp"
#include "adasurv/types.hpp"

namespace adasurv {

// Shared fit settings for the forest and boosted paths; the per-engine
// configs are derived from this.
struct ModelConfig {
    Method method = Method::Rsf;
    int ntree = 10;
    int iterations = 10;
    int mtry = 0;
    int random_cutpoints = 1;
    SplitRule rule = SplitRule::LogRank;
    StoppingRule stopping;
    Aggregation aggregation = Aggregation::MeanOfMode;
    double tolerance = 0.5;
    uint64_t seed = 0;
    int threads = 1;

    ForestConfig forest_config() const;   // for Rsf/Esf
    BoostConfig boost_config() const;     // for Ada*
};

struct CauseSpecificModel {
    int cause = 0;
    Method engine = Method::Rsf;
    std::optional<Forest> forest;
    std::optional<BoostedEnsemble> boosted;

    double predict(std::span<const double> x, Aggregation aggregation) const;
    SurvivalCurve survival(std::span<const double> x) const;
    SurvivalCurve chf(std::span<const double> x) const;
};

// Cause-specific recoding: target-cause events stay events, other-cause
// events become censored at their observed time, censored records are
// unchanged. The result is a plain (non-competing) dataset over all records.
Dataset recode_for_cause(const Dataset& data, int cause);

CauseSpecificModel fit_cause_specific(const Dataset& data, int cause, const ModelConfig& config);

struct CauseCurves {
    SurvivalCurve event_free;               // all-cause Kaplan-Meier
    std::vector<int> causes;
    std::vector<SurvivalCurve> incidence;   // Aalen-Johansen per cause
    std::vector<SurvivalCurve> hazard;      // cause-specific Nelson-Aalen per cause
};

// Full-sample nonparametric curves for a competing-risk dataset.
CauseCurves cause_curves(const Dataset& data);

}  // namespace adasurv
