#include "adasurv/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "adasurv/error.hpp"
#include "adasurv/estimators.hpp"
#include "adasurv/rng.hpp"

namespace adasurv {

namespace {

int unique_event_times(const Dataset& data, std::span<const int> members) {
    std::set<double> uniq;
    for (int m : members)
        if (data.records[m].is_event()) uniq.insert(data.records[m].time);
    return static_cast<int>(uniq.size());
}

void finalize_leaf(const Dataset& data, TreeNode& node) {
    node.feature = -1;
    node.event_times.clear();
    for (int m : node.members)
        if (data.records[m].is_event()) node.event_times.push_back(data.records[m].time);
    std::sort(node.event_times.begin(), node.event_times.end());
    node.chf = nelson_aalen(risk_table(data, node.members));
    node.mode_time = leaf_mode_time(node);
}

}  // namespace

std::vector<int> SurvivalTree::leaf_ids() const {
    std::vector<int> ids;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].is_leaf()) ids.push_back(static_cast<int>(i));
    return ids;
}

SurvivalTree grow(const Dataset& data, std::vector<int> members, const GrowthConfig& config) {
    if (members.empty()) throw DomainError("grow: empty member set");
    for (int m : members) {
        if (m < 0 || static_cast<size_t>(m) >= data.size())
            throw DomainError("grow: member index out of range");
    }
    if (unique_event_times(data, members) == 0)
        throw DomainError("grow: member set holds no events");

    SurvivalTree tree;
    tree.meta = config;
    tree.num_features = static_cast<int>(data.num_features());

    tree.nodes.emplace_back();
    tree.nodes[0].members = std::move(members);

    const int node_stop = config.stopping.node_stop_events();
    const int child_floor = config.stopping.child_floor();

    std::deque<std::pair<int, int>> pending{{0, 0}};  // node id, depth
    while (!pending.empty()) {
        const auto [id, depth] = pending.front();
        pending.pop_front();

        if (unique_event_times(data, tree.nodes[id].members) <= node_stop ||
            (config.stopping.max_depth >= 0 && depth >= config.stopping.max_depth)) {
            finalize_leaf(data, tree.nodes[id]);
            continue;
        }

        SplitContext ctx;
        ctx.members = tree.nodes[id].members;
        ctx.variant = config.variant;
        ctx.rule = config.rule;
        ctx.mtry = config.mtry;
        ctx.random_cutpoints = config.random_cutpoints;
        ctx.rng_seed = derive_seed(config.seed, "node", static_cast<uint64_t>(id));
        const auto cand = best_split(ctx, data);
        if (!cand) {
            finalize_leaf(data, tree.nodes[id]);
            continue;
        }

        std::vector<int> left, right;
        for (int m : tree.nodes[id].members) {
            if (data.records[m].covariates[cand->feature] <= cand->cutpoint)
                left.push_back(m);
            else
                right.push_back(m);
        }
        if (unique_event_times(data, left) < child_floor ||
            unique_event_times(data, right) < child_floor) {
            finalize_leaf(data, tree.nodes[id]);
            continue;
        }

        const int left_id = static_cast<int>(tree.nodes.size());
        const int right_id = left_id + 1;
        tree.nodes[id].feature = cand->feature;
        tree.nodes[id].cutpoint = cand->cutpoint;
        tree.nodes[id].left = left_id;
        tree.nodes[id].right = right_id;
        tree.nodes[id].members.clear();

        tree.nodes.emplace_back();
        tree.nodes[left_id].members = std::move(left);
        tree.nodes.emplace_back();
        tree.nodes[right_id].members = std::move(right);
        pending.emplace_back(left_id, depth + 1);
        pending.emplace_back(right_id, depth + 1);
    }
    return tree;
}

const TreeNode& drop_down(const SurvivalTree& tree, std::span<const double> x) {
    if (static_cast<int>(x.size()) != tree.num_features)
        throw MismatchError("drop_down: expected " + std::to_string(tree.num_features) +
                            " covariates, got " + std::to_string(x.size()));
    const TreeNode* node = &tree.nodes[0];
    while (!node->is_leaf())
        node = &tree.nodes[x[node->feature] <= node->cutpoint ? node->left : node->right];
    return *node;
}

double leaf_mode_time(const TreeNode& leaf) {
    if (leaf.event_times.empty()) throw DomainError("leaf_mode_time: leaf has no event times");
    // event_times is sorted; longest run wins, earliest run on ties
    double best_time = leaf.event_times[0];
    size_t best_count = 0;
    size_t i = 0;
    while (i < leaf.event_times.size()) {
        size_t j = i;
        while (j < leaf.event_times.size() && leaf.event_times[j] == leaf.event_times[i]) ++j;
        if (j - i > best_count) {
            best_count = j - i;
            best_time = leaf.event_times[i];
        }
        i = j;
    }
    return best_time;
}

}  // namespace adasurv
