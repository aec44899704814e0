#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adasurv/rng.hpp"
#include "adasurv/tree.hpp"
#include "adasurv/types.hpp"

namespace adasurv {

enum class ForestVariant { Rsf, Esf };

struct ForestConfig {
    ForestVariant variant = ForestVariant::Rsf;
    int ntree = 10;
    GrowthConfig tree;  // tree.variant/seed are derived per tree from this config
    uint64_t seed = 0;
    int threads = 1;
};

struct Forest {
    ForestVariant variant = ForestVariant::Rsf;
    int ntree = 0;
    uint64_t master_seed = 0;
    std::vector<double> event_time_vocabulary;  // sorted distinct training event times
    std::vector<SurvivalTree> trees;
    int num_features = 0;
};

// RSF draws ntree bootstrap samples of size n with replacement; ESF grows
// ntree randomized-cutpoint trees on the full sample. Per-tree seeds derive
// from the master seed by tree index, so results are independent of the
// thread count.
Forest fit_forest(const Dataset& data, const ForestConfig& config);

// Size-n draw with replacement; exposed for out-of-bag statistics.
std::vector<int> bootstrap_sample(Rng& rng, int n);

// Pointwise mean of the per-tree leaf CHFs on the union of their jump times.
SurvivalCurve ensemble_chf(const Forest& forest, std::span<const double> x);

// exp(-ensemble_chf) pointwise.
SurvivalCurve ensemble_survival(const Forest& forest, std::span<const double> x);

// Nearest vocabulary time; equidistant ties take the smaller time.
double snap_to_vocabulary(double t, std::span<const double> vocabulary);

// MeanOfMode: mean over trees of the reached leaf's mode event time.
// MappedMeanOfMode: that mean snapped to the training vocabulary.
double predict_time(const Forest& forest, std::span<const double> x, Aggregation aggregation);

}  // namespace adasurv
