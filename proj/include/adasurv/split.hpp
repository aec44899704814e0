#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adasurv/types.hpp"

namespace adasurv {

enum class SplitRule { LogRank, LogRankScore };
enum class SplitVariant { RsfExhaustive, EsfRandom };

struct SplitCandidate {
    int feature = -1;
    double cutpoint = 0.0;
    double score = 0.0;  // |LR| or |LRS|
};

struct SplitContext {
    std::span<const int> members;  // node member record indices, multiplicity allowed
    SplitVariant variant = SplitVariant::RsfExhaustive;
    SplitRule rule = SplitRule::LogRank;
    int mtry = 0;              // 0 resolves to ceil(sqrt(p))
    int random_cutpoints = 1;  // ESF draws per sampled feature
    uint64_t rng_seed = 0;
};

// Standardized log-rank statistic for the child1/child2 partition given by
// left_mask (aligned with members). Summed over the parent's distinct event
// times; the variance factor d(R-d)/(R-1) is taken as 0 when R = 1. Returns
// 0 when the variance sum is 0.
double logrank_statistic(const Dataset& data, std::span<const int> members,
                         std::span<const char> left_mask);

// Standardized log-rank-score statistic for the cutpoint x[feature] <= c.
// Scores are a_i = delta_i - NelsonAalen_parent(T_i); zero score variance
// or an empty side returns 0.
double logrank_score_statistic(const Dataset& data, std::span<const int> members,
                               int feature, double cutpoint);

int resolve_mtry(int mtry, size_t num_features);

// Maximal-|statistic| candidate over the sampled features. RSF enumerates
// midpoints between consecutive distinct node-local values; ESF draws
// ctx.random_cutpoints uniform points per feature between the node-local
// min and max. Ties break toward lower feature index, then lower cutpoint.
// Absent when no candidate yields two nonempty children with score > 0.
std::optional<SplitCandidate> best_split(const SplitContext& ctx, const Dataset& data);

}  // namespace adasurv
