#include "adasurv/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adasurv/error.hpp"
#include "adasurv/estimators.hpp"
#include "adasurv/rng.hpp"

namespace adasurv {

namespace {

struct NodeItem {
    double time;
    bool event;
};

// Distinct event times of the node plus the fixed parent-side counts of the
// log-rank formula. Members are bucketed so child-side at-risk counts can be
// maintained incrementally while sweeping cutpoints.
struct LogRankScratch {
    std::vector<double> event_times;  // ascending
    std::vector<double> d_total;      // events per event time
    std::vector<double> r_total;      // at risk per event time
    std::vector<int> bucket;          // per member: #event times <= member time
    std::vector<char> is_event_time;  // per member: event at its own time

    std::vector<double> add1;  // per bucket: child1 members added
    std::vector<double> d1;    // per event time: child1 events
    std::vector<double> r1;    // scratch for suffix sums

    void reset_child() {
        std::fill(add1.begin(), add1.end(), 0.0);
        std::fill(d1.begin(), d1.end(), 0.0);
    }

    void add_to_child1(int member_pos) {
        add1[bucket[member_pos]] += 1.0;
        if (is_event_time[member_pos]) d1[bucket[member_pos] - 1] += 1.0;
    }

    // Standardized log-rank statistic of the current child1 against the rest.
    double statistic() {
        const size_t t = event_times.size();
        // r1[i] = child1 members with time >= event_times[i]
        double suffix = 0.0;
        for (size_t i = t; i-- > 0;) {
            suffix += add1[i + 1];
            r1[i] = suffix;
        }
        double num = 0.0, var = 0.0;
        for (size_t i = 0; i < t; ++i) {
            const double r = r_total[i];
            const double d = d_total[i];
            num += d1[i] - r1[i] * d / r;
            if (r > 1.0) var += (d * (r - d) / (r - 1.0)) * (r1[i] / r) * (1.0 - r1[i] / r);
        }
        if (var <= 0.0) return 0.0;
        return num / std::sqrt(var);
    }
};

LogRankScratch make_scratch(const std::vector<NodeItem>& items) {
    LogRankScratch s;
    for (const auto& it : items)
        if (it.event) s.event_times.push_back(it.time);
    std::sort(s.event_times.begin(), s.event_times.end());
    s.event_times.erase(std::unique(s.event_times.begin(), s.event_times.end()),
                        s.event_times.end());

    const size_t t = s.event_times.size();
    s.d_total.assign(t, 0.0);
    s.r_total.assign(t, 0.0);
    s.bucket.resize(items.size());
    s.is_event_time.resize(items.size());
    for (size_t m = 0; m < items.size(); ++m) {
        const auto up = std::upper_bound(s.event_times.begin(), s.event_times.end(), items[m].time);
        s.bucket[m] = static_cast<int>(up - s.event_times.begin());
        s.is_event_time[m] = items[m].event;
        if (items[m].event) s.d_total[s.bucket[m] - 1] += 1.0;
        for (int i = 0; i < s.bucket[m]; ++i) s.r_total[i] += 1.0;
    }
    s.add1.assign(t + 1, 0.0);
    s.d1.assign(t, 0.0);
    s.r1.assign(t, 0.0);
    return s;
}

std::vector<NodeItem> gather_items(const Dataset& data, std::span<const int> members) {
    std::vector<NodeItem> items;
    items.reserve(members.size());
    for (int m : members) {
        const auto& r = data.records[m];
        items.push_back({r.time, r.is_event()});
    }
    return items;
}

// Log-rank scores a_i = delta_i - NelsonAalen_node(T_i) per member instance.
std::vector<double> node_scores(const Dataset& data, std::span<const int> members) {
    const auto hazard = nelson_aalen(risk_table(data, members));
    std::vector<double> scores;
    scores.reserve(members.size());
    for (int m : members) {
        const auto& r = data.records[m];
        scores.push_back((r.is_event() ? 1.0 : 0.0) - hazard.at(r.time));
    }
    return scores;
}

struct ScoreMoments {
    double n = 0.0;
    double mean = 0.0;
    double variance = 0.0;  // n-1 denominator
};

ScoreMoments score_moments(const std::vector<double>& scores) {
    ScoreMoments mo;
    mo.n = static_cast<double>(scores.size());
    if (scores.empty()) return mo;
    mo.mean = std::accumulate(scores.begin(), scores.end(), 0.0) / mo.n;
    if (mo.n < 2.0) return mo;
    double ss = 0.0;
    for (double a : scores) ss += (a - mo.mean) * (a - mo.mean);
    mo.variance = ss / (mo.n - 1.0);
    return mo;
}

double lrs_statistic(const ScoreMoments& mo, double left_sum, double n1) {
    if (n1 <= 0.0 || n1 >= mo.n) return 0.0;
    const double denom2 = n1 * (1.0 - n1 / mo.n) * mo.variance;
    if (denom2 <= 0.0) return 0.0;
    return (left_sum - n1 * mo.mean) / std::sqrt(denom2);
}

}  // namespace

double logrank_statistic(const Dataset& data, std::span<const int> members,
                         std::span<const char> left_mask) {
    if (members.size() != left_mask.size())
        throw DomainError("logrank_statistic: mask length must match member count");
    size_t n1 = 0;
    for (char c : left_mask) n1 += c != 0;
    if (n1 == 0 || n1 == members.size())
        throw DomainError("logrank_statistic: both children must be nonempty");

    auto items = gather_items(data, members);
    auto scratch = make_scratch(items);
    for (size_t i = 0; i < items.size(); ++i)
        if (left_mask[i]) scratch.add_to_child1(static_cast<int>(i));
    return scratch.statistic();
}

double logrank_score_statistic(const Dataset& data, std::span<const int> members, int feature,
                               double cutpoint) {
    if (feature < 0 || static_cast<size_t>(feature) >= data.num_features())
        throw DomainError("logrank_score_statistic: feature index out of range");
    const auto scores = node_scores(data, members);
    const auto mo = score_moments(scores);
    double left_sum = 0.0, n1 = 0.0;
    for (size_t i = 0; i < members.size(); ++i) {
        if (data.records[members[i]].covariates[feature] <= cutpoint) {
            left_sum += scores[i];
            n1 += 1.0;
        }
    }
    return lrs_statistic(mo, left_sum, n1);
}

int resolve_mtry(int mtry, size_t num_features) {
    const int p = static_cast<int>(num_features);
    if (mtry <= 0) mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p))));
    return std::clamp(mtry, 1, p);
}

std::optional<SplitCandidate> best_split(const SplitContext& ctx, const Dataset& data) {
    const size_t n = ctx.members.size();
    const size_t p = data.num_features();
    if (n < 2 || p == 0) return std::nullopt;

    auto items = gather_items(data, ctx.members);
    if (std::none_of(items.begin(), items.end(), [](const NodeItem& it) { return it.event; }))
        return std::nullopt;

    Rng rng(ctx.rng_seed);
    const int mtry = resolve_mtry(ctx.mtry, p);
    std::vector<int> features(p);
    std::iota(features.begin(), features.end(), 0);
    for (int i = 0; i < mtry; ++i) {
        const int j = i + rng.next_below(static_cast<int>(p) - i);
        std::swap(features[i], features[j]);
    }
    features.resize(mtry);
    std::sort(features.begin(), features.end());

    auto scratch = make_scratch(items);
    std::vector<double> scores;
    ScoreMoments moments;
    if (ctx.rule == SplitRule::LogRankScore) {
        scores = node_scores(data, ctx.members);
        moments = score_moments(scores);
    }

    // member positions sorted by feature value, rebuilt per feature
    std::vector<int> order(n);
    std::optional<SplitCandidate> best;

    for (int f : features) {
        std::vector<double> values(n);
        for (size_t i = 0; i < n; ++i) values[i] = data.records[ctx.members[i]].covariates[f];

        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return values[a] < values[b]; });

        std::vector<double> cutpoints;
        if (ctx.variant == SplitVariant::RsfExhaustive) {
            for (size_t i = 0; i + 1 < n; ++i) {
                const double lo = values[order[i]], hi = values[order[i + 1]];
                if (lo < hi) cutpoints.push_back(lo + (hi - lo) / 2.0);
            }
        } else {
            const double lo = values[order.front()], hi = values[order.back()];
            if (lo >= hi) continue;
            for (int k = 0; k < std::max(1, ctx.random_cutpoints); ++k)
                cutpoints.push_back(rng.next_real(lo, hi));
            std::sort(cutpoints.begin(), cutpoints.end());
        }
        if (cutpoints.empty()) continue;

        scratch.reset_child();
        double left_sum = 0.0;
        size_t n1 = 0;
        size_t pos = 0;  // next value-sorted member not yet in child1
        for (double c : cutpoints) {
            while (pos < n && values[order[pos]] <= c) {
                scratch.add_to_child1(order[pos]);
                if (ctx.rule == SplitRule::LogRankScore) left_sum += scores[order[pos]];
                ++n1;
                ++pos;
            }
            if (n1 == 0 || n1 == n) continue;

            const double stat = ctx.rule == SplitRule::LogRank
                                    ? scratch.statistic()
                                    : lrs_statistic(moments, left_sum, static_cast<double>(n1));
            const double score = std::fabs(stat);
            if (!std::isfinite(score) || score <= 0.0) continue;
            if (!best || score > best->score) best = SplitCandidate{f, c, score};
        }
    }
    return best;
}

}  // namespace adasurv
