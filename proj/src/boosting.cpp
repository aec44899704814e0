#include "adasurv/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adasurv/error.hpp"
#include "adasurv/threading.hpp"

namespace adasurv {

namespace {

constexpr int kMaxRedraws = 1000;

std::vector<int> weighted_sample(Rng& rng, const std::vector<double>& weights, int count) {
    std::vector<double> cdf(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cdf.begin());
    const double total = cdf.back();
    std::vector<int> sample(count);
    for (int i = 0; i < count; ++i) {
        const double u = rng.next_unit() * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        sample[i] = std::min<int>(static_cast<int>(it - cdf.begin()),
                                  static_cast<int>(cdf.size()) - 1);
    }
    return sample;
}

Dataset materialize(const Dataset& data, const std::vector<int>& indices) {
    Dataset sub;
    sub.feature_names = data.feature_names;
    sub.competing_risk = data.competing_risk;
    sub.causes = data.causes;
    sub.records.reserve(indices.size());
    for (int i : indices) sub.records.push_back(data.records[i]);
    return sub;
}

ForestVariant stage_variant(BoostVariation variation, int iteration_1based) {
    switch (variation) {
        case BoostVariation::AdaRsf: return ForestVariant::Rsf;
        case BoostVariation::AdaEsf: return ForestVariant::Esf;
        case BoostVariation::AdaMix:
            return iteration_1based % 2 == 1 ? ForestVariant::Rsf : ForestVariant::Esf;
    }
    return ForestVariant::Rsf;
}

std::vector<double> stage_predictions(const Forest& learner, const Dataset& data,
                                      Aggregation aggregation, int threads) {
    std::vector<double> preds(data.size());
    parallel_for(data.size(), threads, [&](size_t i) {
        preds[i] = predict_time(learner, data.records[i].covariates, aggregation);
    });
    return preds;
}

// Union-grid alpha-weighted mean of per-stage curves.
SurvivalCurve combine_stage_curves(const BoostedEnsemble& ensemble, std::span<const double> x,
                                   CurveKind kind) {
    if (ensemble.stages.empty()) throw DomainError("boosted curve: empty ensemble");
    double alpha_total = 0.0;
    for (const auto& s : ensemble.stages) alpha_total += s.alpha;
    if (!(alpha_total > 0.0))
        throw DomainError("boosted curve: total stage weight is not positive");

    std::vector<SurvivalCurve> curves;
    curves.reserve(ensemble.stages.size());
    for (const auto& s : ensemble.stages)
        curves.push_back(kind == CurveKind::Survival ? ensemble_survival(s.learner, x)
                                                     : ensemble_chf(s.learner, x));
    std::vector<double> grid;
    for (const auto& c : curves) grid.insert(grid.end(), c.times.begin(), c.times.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SurvivalCurve out;
    out.kind = kind;
    out.times = std::move(grid);
    out.values.reserve(out.times.size());
    for (double t : out.times) {
        double v = 0.0;
        for (size_t s = 0; s < curves.size(); ++s) v += ensemble.stages[s].alpha * curves[s].at(t);
        out.values.push_back(v / alpha_total);
    }
    return out;
}

}  // namespace

double event_time_stddev(const Dataset& data) {
    std::vector<double> times;
    for (const auto& r : data.records)
        if (r.is_event()) times.push_back(r.time);
    if (times.size() < 2) return 0.0;
    const double n = static_cast<double>(times.size());
    const double mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
    double ss = 0.0;
    for (double t : times) ss += (t - mean) * (t - mean);
    return std::sqrt(ss / (n - 1.0));
}

double boost_alpha(double epsilon) { return std::log((1.0 - epsilon) / epsilon); }

bool is_correct(double prediction, const SurvivalRecord& truth, double abs_tolerance) {
    if (truth.is_event()) return std::fabs(prediction - truth.time) <= abs_tolerance;
    return prediction >= truth.time;
}

BoostedEnsemble fit_boosted(const Dataset& data, const BoostConfig& config) {
    if (config.iterations < 1) throw ConfigError("fit_boosted: iterations must be >= 1");
    if (!(config.tolerance > 0.0)) throw ConfigError("fit_boosted: tolerance must be positive");
    const int n = static_cast<int>(data.size());
    int events = 0;
    for (const auto& r : data.records) events += r.is_event();
    if (events < 2) throw DomainError("fit_boosted: need at least 2 events");

    BoostedEnsemble ensemble;
    ensemble.variation = config.variation;
    ensemble.aggregation = config.aggregation;
    ensemble.tolerance = config.tolerance;
    ensemble.abs_tolerance = config.tolerance * event_time_stddev(data);
    ensemble.num_features = static_cast<int>(data.num_features());
    for (const auto& r : data.records)
        if (r.is_event()) ensemble.vocabulary.push_back(r.time);
    std::sort(ensemble.vocabulary.begin(), ensemble.vocabulary.end());
    ensemble.vocabulary.erase(std::unique(ensemble.vocabulary.begin(), ensemble.vocabulary.end()),
                              ensemble.vocabulary.end());

    std::vector<double> weights(n, 1.0 / n);
    ensemble.weight_history.push_back(weights);

    for (int m = 1; m <= config.iterations; ++m) {
        // (a) weighted resample of size n; the bag must contain an event
        Rng draw_rng(derive_seed(config.seed, "boost-draw", static_cast<uint64_t>(m)));
        std::vector<int> bag;
        for (int attempt = 0;; ++attempt) {
            bag = weighted_sample(draw_rng, weights, n);
            if (std::any_of(bag.begin(), bag.end(),
                            [&](int i) { return data.records[i].is_event(); }))
                break;
            if (attempt >= kMaxRedraws)
                throw DomainError("fit_boosted: could not draw a weighted sample with events");
        }

        // (b) fit the weak learner on the bag
        ForestConfig weak = config.weak;
        weak.variant = stage_variant(config.variation, m);
        weak.seed = derive_seed(config.seed, "boost-learner", static_cast<uint64_t>(m));
        Forest learner = fit_forest(materialize(data, bag), weak);

        // (c) weighted error on the full training set, then the stage weight
        const auto preds = stage_predictions(learner, data, config.aggregation,
                                             config.weak.threads);
        std::vector<char> incorrect(n);
        double weight_total = 0.0, error_total = 0.0;
        for (int i = 0; i < n; ++i) {
            incorrect[i] = !is_correct(preds[i], data.records[i], ensemble.abs_tolerance);
            weight_total += weights[i];
            if (incorrect[i]) error_total += weights[i];
        }
        const double raw_epsilon = error_total / weight_total;
        const double epsilon =
            std::clamp(raw_epsilon, config.epsilon_floor, config.epsilon_ceiling);
        const double alpha = boost_alpha(epsilon);

        // (d) multiplicative update on the misclassified records
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            if (incorrect[i]) weights[i] *= std::exp(alpha);
            total += weights[i];
        }
        for (double& w : weights) w /= total;
        ensemble.weight_history.push_back(weights);

        ensemble.stages.push_back({std::move(learner), alpha, epsilon, raw_epsilon});
    }
    return ensemble;
}

double predict_boosted(const BoostedEnsemble& ensemble, std::span<const double> x) {
    if (ensemble.stages.empty()) throw DomainError("predict_boosted: empty ensemble");
    // single stage: the normalization cancels alpha_1 exactly
    if (ensemble.stages.size() == 1)
        return predict_time(ensemble.stages[0].learner, x, ensemble.aggregation);
    double alpha_total = 0.0, combined = 0.0;
    for (const auto& stage : ensemble.stages) {
        combined += stage.alpha * predict_time(stage.learner, x, ensemble.aggregation);
        alpha_total += stage.alpha;
    }
    if (!(alpha_total > 0.0))
        throw DomainError("predict_boosted: total stage weight is not positive");
    const double mean = combined / alpha_total;
    if (ensemble.aggregation == Aggregation::MeanOfMode) return mean;
    return snap_to_vocabulary(mean, ensemble.vocabulary);
}

double exponential_error(const BoostedEnsemble& ensemble, const Dataset& data, int prefix) {
    const size_t stages = prefix < 0 ? ensemble.stages.size()
                                     : std::min<size_t>(prefix, ensemble.stages.size());
    if (data.records.empty()) return 0.0;

    std::vector<double> margins(data.size(), 0.0);
    for (size_t s = 0; s < stages; ++s) {
        const auto& stage = ensemble.stages[s];
        for (size_t i = 0; i < data.size(); ++i) {
            const double pred =
                predict_time(stage.learner, data.records[i].covariates, ensemble.aggregation);
            const double sign =
                is_correct(pred, data.records[i], ensemble.abs_tolerance) ? 1.0 : -1.0;
            margins[i] += 0.5 * stage.alpha * sign;
        }
    }
    double total = 0.0;
    for (double m : margins) total += std::exp(-m);
    return total;
}

SurvivalCurve boosted_survival(const BoostedEnsemble& ensemble, std::span<const double> x) {
    return combine_stage_curves(ensemble, x, CurveKind::Survival);
}

SurvivalCurve boosted_chf(const BoostedEnsemble& ensemble, std::span<const double> x) {
    return combine_stage_curves(ensemble, x, CurveKind::CumulativeHazard);
}

}  // namespace adasurv
