#include <doctest.h>

#include "adasurv/competing.hpp"
#include "adasurv/estimators.hpp"
#include "adasurv/error.hpp"
#include "adasurv/serialize.hpp"
#include "helpers.hpp"

using namespace adasurv;
using testutil::make_dataset;
using testutil::rec;

namespace {

ModelConfig small_model(Method method, uint64_t seed) {
    ModelConfig mc;
    mc.method = method;
    mc.ntree = 4;
    mc.iterations = 2;
    mc.stopping.d0_reference = 2;
    mc.seed = seed;
    return mc;
}

}  // namespace

TEST_CASE("recode_for_cause binarizes events") {
    auto d = make_dataset({rec(2, true, {1}, 1), rec(2, true, {2}, 2), rec(5, false, {3})},
                          {"x0"}, {1, 2});
    auto recoded = recode_for_cause(d, 1);
    REQUIRE(recoded.size() == 3);
    CHECK_FALSE(recoded.competing_risk);
    CHECK(recoded.records[0].is_event());
    CHECK(recoded.records[0].time == 2);
    CHECK(recoded.records[0].cause == 0);
    CHECK_FALSE(recoded.records[1].is_event());  // other cause becomes censored
    CHECK(recoded.records[1].time == 2);
    CHECK_FALSE(recoded.records[2].is_event());  // censored unchanged
    CHECK(recoded.records[2].time == 5);

    CHECK_THROWS_AS(recode_for_cause(d, 9), DomainError);
}

TEST_CASE("recode arithmetic matches the competing counts") {
    // 5 cause-1, 3 cause-2, 4 censored: cause-1 recode -> 5 events, 7 censored
    std::vector<SurvivalRecord> records;
    for (int i = 0; i < 5; ++i) records.push_back(rec(1 + i, true, {1.0 * i}, 1));
    for (int i = 0; i < 3; ++i) records.push_back(rec(2 + i, true, {2.0 * i}, 2));
    for (int i = 0; i < 4; ++i) records.push_back(rec(3 + i, false, {3.0 * i}));
    auto d = make_dataset(std::move(records), {"x0"}, {1, 2});
    auto recoded = recode_for_cause(d, 1);
    int events = 0;
    for (const auto& r : recoded.records) events += r.is_event();
    CHECK(events == 5);
    CHECK(recoded.size() - events == 7);
}

TEST_CASE("single-cause competing fit reduces to the plain pipeline") {
    Rng rng(99);
    std::vector<SurvivalRecord> records;
    for (int i = 0; i < 25; ++i) {
        const bool event = rng.next_unit() < 0.7 || i == 0;
        records.push_back(rec(0.5 * (1 + rng.next_below(10)), event,
                              {static_cast<double>(rng.next_below(8)),
                               static_cast<double>(rng.next_below(8))},
                              event ? 1 : 0));
    }
    auto competing = make_dataset(records, {"a", "b"}, {1});

    // the same records without competing-risk bookkeeping
    auto plain_records = records;
    for (auto& r : plain_records) r.cause = 0;
    auto plain = make_dataset(std::move(plain_records), {"a", "b"});

    for (Method method : {Method::Rsf, Method::Esf}) {
        auto mc = small_model(method, 1234);
        auto model = fit_cause_specific(competing, 1, mc);
        auto reference = fit_forest(plain, mc.forest_config());
        REQUIRE(model.forest.has_value());
        CHECK(forest_to_json(*model.forest) == forest_to_json(reference));
    }
}

TEST_CASE("fit_cause_specific is deterministic and engine-faithful") {
    Rng rng(7);
    auto d = testutil::random_survival_data(rng, 30, 2, 2, 0.2);
    auto a = fit_cause_specific(d, 1, small_model(Method::AdaEsf, 5));
    auto b = fit_cause_specific(d, 1, small_model(Method::AdaEsf, 5));
    REQUIRE(a.boosted.has_value());
    REQUIRE(b.boosted.has_value());
    CHECK(boosted_to_json(*a.boosted) == boosted_to_json(*b.boosted));
    CHECK(a.cause == 1);
    CHECK(a.engine == Method::AdaEsf);

    // predictions stay positive and finite
    for (int q = 0; q < 5; ++q) {
        std::vector<double> x{static_cast<double>(rng.next_below(8)),
                              static_cast<double>(rng.next_below(8))};
        const double pred = a.predict(x, Aggregation::MeanOfMode);
        CHECK(pred > 0.0);
        CHECK(std::isfinite(pred));
    }
}

TEST_CASE("cause_curves produces the full nonparametric family") {
    auto d = make_dataset({rec(1, true, {0}, 1), rec(2, true, {0}, 2), rec(3, false, {0})},
                          {"x0"}, {1, 2});
    auto curves = cause_curves(d);
    REQUIRE(curves.causes == std::vector<int>{1, 2});
    REQUIRE(curves.incidence.size() == 2);
    REQUIRE(curves.hazard.size() == 2);

    // additivity of the cause-specific hazards
    auto all_cause = nelson_aalen(risk_table(d.records));
    for (double t : {1.0, 2.0, 3.0, 10.0}) {
        CHECK(curves.hazard[0].at(t) + curves.hazard[1].at(t) ==
              doctest::Approx(all_cause.at(t)).epsilon(1e-12));
        CHECK(curves.event_free.at(t) + curves.incidence[0].at(t) + curves.incidence[1].at(t) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }

    auto plain = make_dataset({rec(1, true, {0})}, {"x0"});
    CHECK_THROWS_AS(cause_curves(plain), DomainError);
}

TEST_CASE("single-cause incidence mirrors one minus survival") {
    Rng rng(404);
    auto d = testutil::random_survival_data(rng, 20, 1, 1);
    auto curves = cause_curves(d);
    REQUIRE(curves.causes == std::vector<int>{1});
    for (double t : curves.event_free.times)
        CHECK(curves.incidence[0].at(t) ==
              doctest::Approx(1.0 - curves.event_free.at(t)).epsilon(1e-12));
}
