#include "adasurv/competing.hpp"

#include <algorithm>

#include "adasurv/error.hpp"
#include "adasurv/estimators.hpp"

namespace adasurv {

ForestConfig ModelConfig::forest_config() const {
    ForestConfig fc;
    fc.variant = method == Method::Esf ? ForestVariant::Esf : ForestVariant::Rsf;
    fc.ntree = ntree;
    fc.seed = seed;
    fc.threads = threads;
    fc.tree.rule = rule;
    fc.tree.mtry = mtry;
    fc.tree.random_cutpoints = random_cutpoints;
    fc.tree.stopping = stopping;
    return fc;
}

BoostConfig ModelConfig::boost_config() const {
    BoostConfig bc;
    bc.iterations = iterations;
    switch (method) {
        case Method::AdaEsf: bc.variation = BoostVariation::AdaEsf; break;
        case Method::AdaMix: bc.variation = BoostVariation::AdaMix; break;
        default: bc.variation = BoostVariation::AdaRsf; break;
    }
    bc.aggregation = aggregation;
    bc.tolerance = tolerance;
    bc.seed = seed;
    bc.weak.ntree = ntree;
    bc.weak.threads = threads;
    bc.weak.tree.rule = rule;
    bc.weak.tree.mtry = mtry;
    bc.weak.tree.random_cutpoints = random_cutpoints;
    bc.weak.tree.stopping = stopping;
    return bc;
}

double CauseSpecificModel::predict(std::span<const double> x, Aggregation aggregation) const {
    if (forest) return predict_time(*forest, x, aggregation);
    return predict_boosted(*boosted, x);
}

SurvivalCurve CauseSpecificModel::survival(std::span<const double> x) const {
    if (forest) return ensemble_survival(*forest, x);
    return boosted_survival(*boosted, x);
}

SurvivalCurve CauseSpecificModel::chf(std::span<const double> x) const {
    if (forest) return ensemble_chf(*forest, x);
    return boosted_chf(*boosted, x);
}

Dataset recode_for_cause(const Dataset& data, int cause) {
    if (!std::binary_search(data.causes.begin(), data.causes.end(), cause))
        throw DomainError("recode_for_cause: cause " + std::to_string(cause) +
                          " not observed in the dataset");
    Dataset out;
    out.feature_names = data.feature_names;
    out.competing_risk = false;
    out.records.reserve(data.size());
    for (const auto& r : data.records) {
        SurvivalRecord rec = r;
        rec.status = (r.is_event() && r.cause == cause) ? Status::Event : Status::Censored;
        rec.cause = 0;
        out.records.push_back(std::move(rec));
    }
    return out;
}

CauseSpecificModel fit_cause_specific(const Dataset& data, int cause, const ModelConfig& config) {
    const Dataset recoded = recode_for_cause(data, cause);
    CauseSpecificModel model;
    model.cause = cause;
    model.engine = config.method;
    if (is_boosted(config.method))
        model.boosted = fit_boosted(recoded, config.boost_config());
    else
        model.forest = fit_forest(recoded, config.forest_config());
    return model;
}

CauseCurves cause_curves(const Dataset& data) {
    if (!data.competing_risk || data.causes.empty())
        throw DomainError("cause_curves: dataset has no competing-risk causes");
    std::vector<int> members(data.size());
    for (size_t i = 0; i < data.size(); ++i) members[i] = static_cast<int>(i);
    const auto table = risk_table(data, members);

    CauseCurves out;
    out.event_free = kaplan_meier(table);
    out.causes = data.causes;
    out.incidence.reserve(data.causes.size());
    out.hazard.reserve(data.causes.size());
    for (int cause : data.causes) {
        out.incidence.push_back(aalen_johansen(table, cause));
        out.hazard.push_back(cause_specific_chf(table, cause));
    }
    return out;
}

}  // namespace adasurv
