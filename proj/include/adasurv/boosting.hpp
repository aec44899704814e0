#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adasurv/forest.hpp"
#include "adasurv/types.hpp"

namespace adasurv {

enum class BoostVariation { AdaRsf, AdaEsf, AdaMix };

struct BoostConfig {
    int iterations = 10;
    BoostVariation variation = BoostVariation::AdaRsf;
    Aggregation aggregation = Aggregation::MeanOfMode;
    double tolerance = 0.5;  // correctness tolerance, in training event-time SDs
    double epsilon_floor = 1e-6;
    double epsilon_ceiling = 0.5 - 1e-6;
    ForestConfig weak;  // ntree / tree settings for each weak learner
    uint64_t seed = 0;
};

struct BoostStage {
    Forest learner;
    double alpha = 0.0;
    double epsilon = 0.0;      // clamped value fed to the log, consistent with alpha
    double raw_epsilon = 0.0;  // weighted training error before the guard
};

struct BoostedEnsemble {
    std::vector<BoostStage> stages;
    BoostVariation variation = BoostVariation::AdaRsf;
    Aggregation aggregation = Aggregation::MeanOfMode;
    double tolerance = 0.5;       // tau
    double abs_tolerance = 0.0;   // tau * s_T, resolved at fit time
    std::vector<double> vocabulary;  // full training event-time vocabulary
    std::vector<std::vector<double>> weight_history;  // initial + after each update
    int num_features = 0;
};

// Sample standard deviation (n-1) of the event times; 0 with fewer than two
// events or identical times.
double event_time_stddev(const Dataset& data);

// Stage weight ln((1 - epsilon) / epsilon).
double boost_alpha(double epsilon);

// Event record: |prediction - t| <= abs_tolerance. Censored record: the
// prediction must be consistent with survival beyond the censoring time,
// prediction >= t.
bool is_correct(double prediction, const SurvivalRecord& truth, double abs_tolerance);

// AdaBoost over survival-forest weak learners: weighted resampling, epsilon
// on the full weighted training set, alpha = ln((1-eps)/eps), multiplicative
// weight update on the misclassified records, renormalized each iteration.
// AdaMix alternates RSF (odd iterations, 1-based) with ESF.
BoostedEnsemble fit_boosted(const Dataset& data, const BoostConfig& config);

// alpha-normalized combination of the stage predictions; snapped to the
// training vocabulary for MappedMeanOfMode.
double predict_boosted(const BoostedEnsemble& ensemble, std::span<const double> x);

// Exponential error of the first `prefix` stages (all stages when < 0):
// sum_n exp(-1/2 * sum_l alpha_l * I_l(n)) with I_l = +1 on records stage l
// predicts correctly and -1 otherwise.
double exponential_error(const BoostedEnsemble& ensemble, const Dataset& data, int prefix = -1);

// alpha-weighted mean of the stage forests' ensemble survival curves.
SurvivalCurve boosted_survival(const BoostedEnsemble& ensemble, std::span<const double> x);

// alpha-weighted mean of the stage forests' ensemble CHF curves.
SurvivalCurve boosted_chf(const BoostedEnsemble& ensemble, std::span<const double> x);

}  // namespace adasurv
