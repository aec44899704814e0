#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "adasurv/split.hpp"
#include "adasurv/types.hpp"

namespace adasurv {

// Leaf rule. A node with <= ceil(0.632 * d0_reference) unique event times is
// not split further; no split may create a child with fewer unique event
// times than child_floor().
struct StoppingRule {
    int d0_reference = 15;
    int min_child_events = 0;  // 0 derives max(1, floor(0.632 * d0_reference / 2))
    int max_depth = -1;        // -1 = unlimited

    int node_stop_events() const {
        return static_cast<int>(std::ceil(0.632 * d0_reference));
    }
    int child_floor() const {
        if (min_child_events > 0) return min_child_events;
        return std::max(1, static_cast<int>(std::floor(0.632 * d0_reference / 2.0)));
    }
};

struct GrowthConfig {
    SplitVariant variant = SplitVariant::RsfExhaustive;
    SplitRule rule = SplitRule::LogRank;
    int mtry = 0;              // 0 resolves to ceil(sqrt(p))
    int random_cutpoints = 1;  // ESF draws per feature
    StoppingRule stopping;
    uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double cutpoint = 0.0;
    int left = -1;
    int right = -1;
    // leaf payload
    std::vector<int> members;         // record indices, multiplicity preserved
    std::vector<double> event_times;  // sorted event-time multiset of the members
    SurvivalCurve chf;                // Nelson-Aalen over the members
    double mode_time = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct SurvivalTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    GrowthConfig meta;
    int num_features = 0;

    const TreeNode& root() const { return nodes.front(); }
    std::vector<int> leaf_ids() const;
};

// Grows one tree over the given member multiset. Throws DomainError when the
// member set is empty or all-censored.
SurvivalTree grow(const Dataset& data, std::vector<int> members, const GrowthConfig& config);

// Routes x to its unique leaf (x[f] <= cutpoint goes left). Throws
// MismatchError on covariate length mismatch.
const TreeNode& drop_down(const SurvivalTree& tree, std::span<const double> x);

// Most frequent event time in the leaf (multiplicity counts); ties take the
// smallest time.
double leaf_mode_time(const TreeNode& leaf);

}  // namespace adasurv
