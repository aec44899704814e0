#include "adasurv/forest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "adasurv/error.hpp"
#include "adasurv/threading.hpp"

namespace adasurv {

namespace {

constexpr int kMaxRedraws = 1000;

bool has_event(const Dataset& data, const std::vector<int>& members) {
    return std::any_of(members.begin(), members.end(),
                       [&](int m) { return data.records[m].is_event(); });
}

std::vector<double> event_vocabulary(const Dataset& data) {
    std::set<double> uniq;
    for (const auto& r : data.records)
        if (r.is_event()) uniq.insert(r.time);
    return {uniq.begin(), uniq.end()};
}

}  // namespace

std::vector<int> bootstrap_sample(Rng& rng, int n) {
    std::vector<int> sample(n);
    for (int i = 0; i < n; ++i) sample[i] = rng.next_below(n);
    return sample;
}

Forest fit_forest(const Dataset& data, const ForestConfig& config) {
    if (config.ntree < 1) throw ConfigError("fit_forest: ntree must be >= 1");
    if (data.size() == 0) throw DomainError("fit_forest: empty dataset");
    const int n = static_cast<int>(data.size());

    Forest forest;
    forest.variant = config.variant;
    forest.ntree = config.ntree;
    forest.master_seed = config.seed;
    forest.num_features = static_cast<int>(data.num_features());
    forest.event_time_vocabulary = event_vocabulary(data);
    if (forest.event_time_vocabulary.empty())
        throw DomainError("fit_forest: dataset holds no events");

    // Draw the per-tree member sets up front; a bootstrap bag must contain an
    // event, so degenerate draws are retried from the same stream.
    std::vector<std::vector<int>> member_sets(config.ntree);
    for (int b = 0; b < config.ntree; ++b) {
        if (config.variant == ForestVariant::Rsf) {
            Rng rng(derive_seed(config.seed, "bootstrap", static_cast<uint64_t>(b)));
            for (int attempt = 0;; ++attempt) {
                member_sets[b] = bootstrap_sample(rng, n);
                if (has_event(data, member_sets[b])) break;
                if (attempt >= kMaxRedraws)
                    throw DomainError("fit_forest: could not draw a bootstrap sample with events");
            }
        } else {
            member_sets[b].resize(n);
            for (int i = 0; i < n; ++i) member_sets[b][i] = i;
        }
    }

    GrowthConfig base = config.tree;
    base.variant = config.variant == ForestVariant::Rsf ? SplitVariant::RsfExhaustive
                                                        : SplitVariant::EsfRandom;

    forest.trees.resize(config.ntree);
    parallel_for(static_cast<size_t>(config.ntree), config.threads, [&](size_t b) {
        GrowthConfig tree_config = base;
        tree_config.seed = derive_seed(config.seed, "tree", b);
        forest.trees[b] = grow(data, std::move(member_sets[b]), tree_config);
    });
    return forest;
}

SurvivalCurve ensemble_chf(const Forest& forest, std::span<const double> x) {
    std::vector<const SurvivalCurve*> curves;
    curves.reserve(forest.trees.size());
    for (const auto& tree : forest.trees) curves.push_back(&drop_down(tree, x).chf);

    std::vector<double> grid;
    for (const auto* c : curves) grid.insert(grid.end(), c->times.begin(), c->times.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SurvivalCurve out;
    out.kind = CurveKind::CumulativeHazard;
    out.times = std::move(grid);
    out.values.reserve(out.times.size());
    const double ntree = static_cast<double>(curves.size());
    for (double t : out.times) {
        double sum = 0.0;
        for (const auto* c : curves) sum += c->at(t);
        out.values.push_back(sum / ntree);
    }
    return out;
}

SurvivalCurve ensemble_survival(const Forest& forest, std::span<const double> x) {
    SurvivalCurve surv = ensemble_chf(forest, x);
    surv.kind = CurveKind::Survival;
    for (double& v : surv.values) v = std::exp(-v);
    return surv;
}

double snap_to_vocabulary(double t, std::span<const double> vocabulary) {
    if (vocabulary.empty()) throw DomainError("snap_to_vocabulary: empty vocabulary");
    auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), t);
    if (it == vocabulary.begin()) return *it;
    if (it == vocabulary.end()) return vocabulary.back();
    const double hi = *it;
    const double lo = *(it - 1);
    return t - lo <= hi - t ? lo : hi;
}

double predict_time(const Forest& forest, std::span<const double> x, Aggregation aggregation) {
    double sum = 0.0;
    for (const auto& tree : forest.trees) sum += drop_down(tree, x).mode_time;
    const double mean = sum / static_cast<double>(forest.trees.size());
    if (aggregation == Aggregation::MeanOfMode) return mean;
    return snap_to_vocabulary(mean, forest.event_time_vocabulary);
}

}  // namespace adasurv
