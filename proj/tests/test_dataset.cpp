#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "adasurv/dataset.hpp"
#include "adasurv/error.hpp"
#include "helpers.hpp"

using namespace adasurv;
using testutil::make_dataset;
using testutil::rec;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        static const long stamp = static_cast<long>(
            std::chrono::steady_clock::now().time_since_epoch().count() % 1000000);
        path = fs::temp_directory_path() /
               ("adasurv-test-" + std::to_string(stamp) + "-" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name, const std::string& contents) const {
        auto p = path / name;
        std::ofstream out(p);
        out << contents;
        return p.string();
    }
};

CsvSchema basic_schema() {
    CsvSchema s;
    s.time_column = "time";
    s.status_column = "status";
    return s;
}

}  // namespace

TEST_CASE("load_csv reads a minimal well-formed file") {
    TempDir tmp;
    auto path = tmp.file("mini.csv", "age,time,status\n50,1.5,1\n60,2,0\n70,3.25,1\n");
    auto result = load_csv(path, basic_schema());
    const auto& d = result.data;
    REQUIRE(d.size() == 3);
    CHECK(d.num_features() == 1);
    CHECK(d.feature_names == std::vector<std::string>{"age"});
    CHECK(d.records[0].covariates == std::vector<double>{50});
    CHECK(d.records[0].time == 1.5);
    CHECK(d.records[0].status == Status::Event);
    CHECK(d.records[1].status == Status::Censored);
    CHECK_FALSE(d.competing_risk);
    CHECK(result.dropped_rows == 0);
}

TEST_CASE("load_csv accepts the documented status symbols") {
    TempDir tmp;
    auto path = tmp.file("status.csv",
                         "time,status\n1,1\n2,0\n3,event\n4,censored\n5,TRUE\n6,FALSE\n");
    auto d = load_csv(path, basic_schema()).data;
    REQUIRE(d.size() == 6);
    CHECK(d.records[0].is_event());
    CHECK_FALSE(d.records[1].is_event());
    CHECK(d.records[2].is_event());
    CHECK_FALSE(d.records[3].is_event());
    CHECK(d.records[4].is_event());
    CHECK_FALSE(d.records[5].is_event());
}

TEST_CASE("load_csv rejects bad inputs with the right error types") {
    TempDir tmp;
    CHECK_THROWS_AS(load_csv((tmp.path / "absent.csv").string(), basic_schema()), ConfigError);

    auto nonpositive = tmp.file("bad_time.csv", "time,status\n-1,1\n");
    CHECK_THROWS_AS(load_csv(nonpositive, basic_schema()), ValidationError);

    auto bad_status = tmp.file("bad_status.csv", "time,status\n1,maybe\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_status, basic_schema()),
                         doctest::Contains("censored"), ValidationError);

    auto ragged = tmp.file("ragged.csv", "time,status\n1,1\n2\n");
    try {
        load_csv(ragged, basic_schema());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    auto unterminated = tmp.file("quote.csv", "time,status\n\"1,1\n");
    CHECK_THROWS_AS(load_csv(unterminated, basic_schema()), ParseError);

    auto missing_col = tmp.file("cols.csv", "t,status\n1,1\n");
    CHECK_THROWS_AS(load_csv(missing_col, basic_schema()), ConfigError);

    auto all_censored = tmp.file("cens.csv", "time,status\n1,0\n2,0\n");
    CHECK_THROWS_AS(load_csv(all_censored, basic_schema()), ValidationError);
}

TEST_CASE("load_csv drops rows with missing covariates but rejects missing time or status") {
    TempDir tmp;
    auto path = tmp.file("missing.csv",
                         "age,time,status\n50,1,1\nNA,2,0\n,3,1\n60,4,1\n");
    auto result = load_csv(path, basic_schema());
    CHECK(result.dropped_rows == 2);
    REQUIRE(result.data.size() == 2);
    CHECK(result.data.records[1].covariates[0] == 60);

    auto bad = tmp.file("missing_time.csv", "age,time,status\n50,,1\n");
    CHECK_THROWS_AS(load_csv(bad, basic_schema()), ValidationError);
    auto bad2 = tmp.file("missing_status.csv", "age,time,status\n50,1,NA\n");
    CHECK_THROWS_AS(load_csv(bad2, basic_schema()), ValidationError);
}

TEST_CASE("load_csv integer-encodes categorical columns by first appearance") {
    TempDir tmp;
    auto path = tmp.file("cat.csv",
                         "stage,time,status\nII,1,1\nI,2,1\nII,3,0\nIII,4,1\n");
    auto d = load_csv(path, basic_schema()).data;
    CHECK(d.records[0].covariates[0] == 0);  // II first
    CHECK(d.records[1].covariates[0] == 1);  // I second
    CHECK(d.records[2].covariates[0] == 0);
    CHECK(d.records[3].covariates[0] == 2);
}

TEST_CASE("load_csv handles quoted fields and explicit covariate selection") {
    TempDir tmp;
    auto path = tmp.file("quoted.csv",
                         "\"name\",\"x, val\",id,time,status\n\"a,b\",1.5,7,1,1\n\"c\"\"d\",2.5,8,2,0\n");
    CsvSchema schema = basic_schema();
    schema.covariates = {"x, val"};
    schema.ignore = {"name", "id"};
    auto d = load_csv(path, schema).data;
    REQUIRE(d.num_features() == 1);
    CHECK(d.feature_names[0] == "x, val");
    CHECK(d.records[0].covariates[0] == 1.5);
    CHECK(d.records[1].covariates[0] == 2.5);
}

TEST_CASE("load_csv reads a cause column into a competing-risk dataset") {
    TempDir tmp;
    auto path = tmp.file("cr.csv",
                         "age,time,status,cause\n5,1,1,1\n6,2,1,2\n7,3,0,0\n8,4,1,1\n");
    CsvSchema schema = basic_schema();
    schema.cause_column = "cause";
    auto d = load_csv(path, schema).data;
    CHECK(d.competing_risk);
    CHECK(d.causes == std::vector<int>{1, 2});
    CHECK(d.records[0].cause == 1);
    CHECK(d.records[2].cause == 0);

    // cause on a censored record violates the invariant
    auto bad = tmp.file("bad_cr.csv", "age,time,status,cause\n5,1,0,1\n6,2,1,1\n");
    CHECK_THROWS_AS(load_csv(bad, schema), ValidationError);
    // event without a cause in a competing dataset does too
    auto bad2 = tmp.file("bad_cr2.csv", "age,time,status,cause\n5,1,1,0\n6,2,1,1\n");
    CHECK_THROWS_AS(load_csv(bad2, schema), ValidationError);
}

TEST_CASE("load_csv does not choke on wide files") {
    TempDir tmp;
    std::string header, row;
    for (int j = 0; j < 300; ++j) {
        header += "g" + std::to_string(j) + ",";
        row += std::to_string(j) + ".5,";
    }
    header += "time,status\n";
    std::string contents = header + row + "1,1\n" + row + "2,0\n";
    auto d = load_csv(tmp.file("wide.csv", contents), basic_schema()).data;
    CHECK(d.num_features() == 300);
    CHECK(d.records[0].covariates[299] == 299.5);
}

TEST_CASE("save_csv round-trips records bitwise") {
    TempDir tmp;
    auto d = make_dataset({rec(0.1, true, {1.0 / 3, 2.5}, 1), rec(7.25, false, {0.3, -1e-9}, 0),
                           rec(2.0 / 7, true, {5, 6}, 2)},
                          {"a", "b"}, {1, 2});
    auto path = (tmp.path / "round.csv").string();
    save_csv(d, path);

    CsvSchema schema = basic_schema();
    schema.cause_column = "cause";
    auto back = load_csv(path, schema).data;
    REQUIRE(back.size() == d.size());
    CHECK(back.feature_names == d.feature_names);
    for (size_t i = 0; i < d.size(); ++i) {
        CHECK(back.records[i].time == d.records[i].time);  // bitwise
        CHECK(back.records[i].status == d.records[i].status);
        CHECK(back.records[i].cause == d.records[i].cause);
        CHECK(back.records[i].covariates == d.records[i].covariates);
    }
}

TEST_CASE("derive_cause_labels applies the precedence rule") {
    auto raw = make_dataset({rec(2, true, {1, 1, 50}), rec(2, true, {0, 1, 60}),
                             rec(3, false, {0, 0, 70}), rec(4, true, {1, 0, 80})},
                            {"relapse", "death", "age"});
    CauseRule rule;
    rule.indicators = {{"relapse", 1}, {"death", 2}};
    auto d = derive_cause_labels(raw, rule);

    REQUIRE(d.size() == 4);
    CHECK(d.competing_risk);
    CHECK(d.feature_names == std::vector<std::string>{"age"});
    CHECK(d.records[0].cause == 1);  // relapse wins over death
    CHECK(d.records[0].is_event());
    CHECK(d.records[1].cause == 2);  // death without relapse
    CHECK(d.records[2].cause == 0);  // neither fired
    CHECK_FALSE(d.records[2].is_event());
    CHECK(d.records[3].cause == 1);
    CHECK(d.causes == std::vector<int>{1, 2});
    CHECK(d.records[0].covariates == std::vector<double>{50});

    CauseRule missing;
    missing.indicators = {{"nope", 1}};
    CHECK_THROWS_AS(derive_cause_labels(raw, missing), ConfigError);
}

TEST_CASE("train_test_split honors the ceil rule and determinism") {
    Rng rng(1);
    auto d = testutil::random_survival_data(rng, 10, 1, 0);
    SplitPlan plan;
    plan.seed = 7;
    plan.test_fraction = 0.3;
    auto [train, test] = train_test_split(d, plan);
    CHECK(train.size() == 7);
    CHECK(test.size() == 3);

    auto [train2, test2] = train_test_split(d, plan);
    REQUIRE(train2.size() == train.size());
    for (size_t i = 0; i < train.size(); ++i) {
        CHECK(train2.records[i].time == train.records[i].time);
        CHECK(train2.records[i].covariates == train.records[i].covariates);
    }

    // exhaustive and disjoint: multiset of times matches
    std::multiset<double> orig, split_times;
    for (const auto& r : d.records) orig.insert(r.time);
    for (const auto& r : train.records) split_times.insert(r.time);
    for (const auto& r : test.records) split_times.insert(r.time);
    CHECK(orig == split_times);
}

TEST_CASE("train_test_split boundary sizes") {
    Rng rng(2);
    auto two = testutil::random_survival_data(rng, 2, 1, 0);
    SplitPlan plan;
    plan.test_fraction = 0.5;
    plan.stratify_status = false;
    auto [train, test] = train_test_split(two, plan);
    CHECK(train.size() == 1);
    CHECK(test.size() == 1);

    auto ten = testutil::random_survival_data(rng, 10, 1, 0);
    plan.test_fraction = 0.05;  // ceil(0.5) -> 1 test record
    auto [train10, test10] = train_test_split(ten, plan);
    CHECK(train10.size() == 9);
    CHECK(test10.size() == 1);
}

TEST_CASE("train_test_split rejects degenerate fractions") {
    Rng rng(3);
    auto d = testutil::random_survival_data(rng, 10, 1, 0);
    SplitPlan plan;
    plan.test_fraction = 0.0;
    CHECK_THROWS_AS(train_test_split(d, plan), ConfigError);
    plan.test_fraction = 1.0;
    CHECK_THROWS_AS(train_test_split(d, plan), ConfigError);

    auto one = testutil::random_survival_data(rng, 1, 1, 0);
    plan.test_fraction = 0.5;
    CHECK_THROWS_AS(train_test_split(one, plan), ConfigError);
}

TEST_CASE("stratified splits keep status proportions within one record") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 10 + rng.next_below(60);
        auto d = testutil::random_survival_data(rng, n, 1, 0);
        SplitPlan plan;
        plan.seed = rng.next_u64();
        plan.test_fraction = 0.1 + 0.8 * rng.next_unit();
        plan.stratify_status = true;
        auto [train, test] = train_test_split(d, plan);

        int events_total = 0, events_test = 0;
        for (const auto& r : d.records) events_total += r.is_event();
        for (const auto& r : test.records) events_test += r.is_event();
        const double expected = events_total * plan.test_fraction;
        CHECK(std::fabs(events_test - expected) < 1.0 + 1e-9);
        CHECK(train.size() + test.size() == d.size());
        CHECK(train.size() >= 1);
        CHECK(test.size() >= 1);
    }
}
