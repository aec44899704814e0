#include <doctest.h>

#include <algorithm>
#include <map>

#include "adasurv/error.hpp"
#include "adasurv/estimators.hpp"
#include "adasurv/tree.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace adasurv;
using testutil::make_dataset;
using testutil::rec;

namespace {

std::vector<int> iota_members(size_t n) {
    std::vector<int> m(n);
    for (size_t i = 0; i < n; ++i) m[i] = static_cast<int>(i);
    return m;
}

GrowthConfig tiny_config(uint64_t seed = 1) {
    GrowthConfig cfg;
    cfg.stopping.d0_reference = 1;  // split as deep as the data allows
    cfg.seed = seed;
    return cfg;
}

// Two clusters separated perfectly by feature 0, with a noise feature.
Dataset two_cluster_data() {
    return make_dataset({rec(1, true, {0, 3}), rec(1.5, true, {0, 1}), rec(2, true, {0, 4}),
                         rec(10, true, {1, 1}), rec(11, true, {1, 5}), rec(12, true, {1, 9})},
                        {"group", "noise"});
}

bool same_structure(const SurvivalTree& a, const SurvivalTree& b) {
    if (a.nodes.size() != b.nodes.size()) return false;
    for (size_t i = 0; i < a.nodes.size(); ++i) {
        const auto& x = a.nodes[i];
        const auto& y = b.nodes[i];
        if (x.feature != y.feature || x.cutpoint != y.cutpoint || x.left != y.left ||
            x.right != y.right || x.members != y.members)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("grow on a single event record yields one leaf with a unit CHF jump") {
    auto d = make_dataset({rec(4, true, {1})}, {"x0"});
    auto tree = grow(d, {0}, tiny_config());
    REQUIRE(tree.nodes.size() == 1);
    const auto& leaf = tree.root();
    REQUIRE(leaf.is_leaf());
    REQUIRE(leaf.chf.times == std::vector<double>{4});
    CHECK(leaf.chf.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(leaf.mode_time == 4);
}

TEST_CASE("grow rejects an all-censored member set") {
    auto d = make_dataset({rec(1, false, {1}), rec(2, false, {2})}, {"x0"});
    CHECK_THROWS_AS(grow(d, {0, 1}, tiny_config()), DomainError);
    CHECK_THROWS_AS(grow(d, {}, tiny_config()), DomainError);
}

TEST_CASE("grow splits separable clusters on the informative feature") {
    auto d = two_cluster_data();
    GrowthConfig cfg;
    cfg.stopping.d0_reference = 5;  // nodes with <= 4 unique events become leaves
    cfg.mtry = 2;
    cfg.seed = 3;
    auto tree = grow(d, iota_members(6), cfg);

    REQUIRE(tree.nodes.size() == 3);
    const auto& root = tree.root();
    REQUIRE_FALSE(root.is_leaf());
    CHECK(root.feature == 0);
    CHECK(root.cutpoint == doctest::Approx(0.5).epsilon(1e-14));

    // the root split equals the exhaustive argmax
    auto brute = oracle::brute_force_best_split(
        testutil::to_obs(d), {{0, 3}, {0, 1}, {0, 4}, {1, 1}, {1, 5}, {1, 9}});
    REQUIRE(brute.has_value());
    CHECK(root.feature == brute->feature);
    CHECK(root.cutpoint == doctest::Approx(brute->cutpoint).epsilon(1e-14));

    CHECK(tree.nodes[root.left].members == std::vector<int>{0, 1, 2});
    CHECK(tree.nodes[root.right].members == std::vector<int>{3, 4, 5});
}

TEST_CASE("grow is deterministic under a fixed seed") {
    Rng rng(123);
    auto d = testutil::random_survival_data(rng, 40, 3, 0);
    auto a = grow(d, iota_members(40), tiny_config(99));
    auto b = grow(d, iota_members(40), tiny_config(99));
    CHECK(same_structure(a, b));

    GrowthConfig esf = tiny_config(99);
    esf.variant = SplitVariant::EsfRandom;
    CHECK(same_structure(grow(d, iota_members(40), esf), grow(d, iota_members(40), esf)));
}

TEST_CASE("leaves partition the member multiset and keep their invariants") {
    Rng rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5 + rng.next_below(40);
        auto d = testutil::random_survival_data(rng, n, 3, 0);
        // bootstrap-style members with duplicates
        std::vector<int> members;
        bool has_event = false;
        for (int i = 0; i < n; ++i) {
            int m = rng.next_below(n);
            members.push_back(m);
            has_event = has_event || d.records[m].is_event();
        }
        if (!has_event) continue;

        GrowthConfig cfg = tiny_config(rng.next_u64());
        cfg.stopping.d0_reference = 2;
        auto tree = grow(d, members, cfg);

        std::vector<int> from_leaves;
        for (int id : tree.leaf_ids()) {
            const auto& leaf = tree.nodes[id];
            from_leaves.insert(from_leaves.end(), leaf.members.begin(), leaf.members.end());

            // every leaf holds at least one event and >= child_floor unique event times
            std::map<double, int> uniq;
            for (int m : leaf.members)
                if (d.records[m].is_event()) uniq[d.records[m].time]++;
            CHECK(static_cast<int>(uniq.size()) >= cfg.stopping.child_floor());

            // cached CHF equals a recomputation over the leaf members
            auto expected = nelson_aalen(risk_table(d, leaf.members));
            CHECK(leaf.chf.times == expected.times);
            CHECK(leaf.chf.values == expected.values);
        }
        auto sorted_members = members;
        std::sort(sorted_members.begin(), sorted_members.end());
        std::sort(from_leaves.begin(), from_leaves.end());
        CHECK(from_leaves == sorted_members);
    }
}

TEST_CASE("stopping rule keeps small nodes unsplit") {
    auto d = two_cluster_data();
    GrowthConfig cfg;
    cfg.stopping.d0_reference = 15;  // node stop at <= 10 unique events; 6 <= 10
    cfg.seed = 1;
    auto tree = grow(d, iota_members(6), cfg);
    CHECK(tree.nodes.size() == 1);
    CHECK(tree.root().is_leaf());
}

TEST_CASE("max_depth bounds growth") {
    Rng rng(8);
    auto d = testutil::random_survival_data(rng, 30, 2, 0);
    GrowthConfig cfg = tiny_config(4);
    cfg.stopping.max_depth = 0;
    auto tree = grow(d, iota_members(30), cfg);
    CHECK(tree.nodes.size() == 1);
}

TEST_CASE("drop_down follows the cutpoint convention") {
    auto d = two_cluster_data();
    GrowthConfig cfg;
    cfg.stopping.d0_reference = 5;
    cfg.mtry = 2;
    cfg.seed = 3;
    auto tree = grow(d, iota_members(6), cfg);
    REQUIRE_FALSE(tree.root().is_leaf());
    const double c = tree.root().cutpoint;

    // exactly at the cutpoint goes left
    const auto& at_cut = drop_down(tree, std::vector<double>{c, 0.0});
    CHECK(&at_cut == &tree.nodes[tree.root().left]);
    const auto& above = drop_down(tree, std::vector<double>{c + 0.001, 0.0});
    CHECK(&above == &tree.nodes[tree.root().right]);

    CHECK_THROWS_AS(drop_down(tree, std::vector<double>{1.0}), MismatchError);
}

TEST_CASE("drop_down routes a single-leaf tree anywhere") {
    auto d = make_dataset({rec(4, true, {1})}, {"x0"});
    auto tree = grow(d, {0}, tiny_config());
    CHECK(&drop_down(tree, std::vector<double>{-100.0}) == &tree.root());
    CHECK(&drop_down(tree, std::vector<double>{100.0}) == &tree.root());
}

TEST_CASE("drop_down sends every training record to the leaf holding it") {
    Rng rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 10 + rng.next_below(30);
        auto d = testutil::random_survival_data(rng, n, 2, 0);
        auto tree = grow(d, iota_members(n), tiny_config(rng.next_u64()));
        for (int i = 0; i < n; ++i) {
            const auto& leaf = drop_down(tree, d.records[i].covariates);
            CHECK(std::count(leaf.members.begin(), leaf.members.end(), i) == 1);
        }
    }
}

TEST_CASE("leaf_mode_time picks the most frequent event time, smallest on ties") {
    TreeNode leaf;
    leaf.event_times = {2, 2, 3};
    CHECK(leaf_mode_time(leaf) == 2);
    leaf.event_times = {2, 2, 3, 3};
    CHECK(leaf_mode_time(leaf) == 2);
    leaf.event_times = {5};
    CHECK(leaf_mode_time(leaf) == 5);
    leaf.event_times = {1, 2, 2, 9, 9, 9};
    CHECK(leaf_mode_time(leaf) == 9);
    leaf.event_times.clear();
    CHECK_THROWS_AS(leaf_mode_time(leaf), DomainError);
}
