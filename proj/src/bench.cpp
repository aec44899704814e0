#include "adasurv/bench.hpp"

#include <chrono>
#include <cmath>

#include "adasurv/error.hpp"
#include "adasurv/estimators.hpp"
#include "adasurv/serialize.hpp"

namespace adasurv {

namespace {

struct FittedMethod {
    std::optional<Forest> forest;
    std::optional<BoostedEnsemble> boosted;

    double predict(std::span<const double> x, Aggregation aggregation) const {
        if (forest) return predict_time(*forest, x, aggregation);
        return predict_boosted(*boosted, x);
    }
    SurvivalCurve survival(std::span<const double> x) const {
        if (forest) return ensemble_survival(*forest, x);
        return boosted_survival(*boosted, x);
    }
};

std::vector<double> mean_covariates(const Dataset& data) {
    std::vector<double> mean(data.num_features(), 0.0);
    for (const auto& r : data.records)
        for (size_t j = 0; j < mean.size(); ++j) mean[j] += r.covariates[j];
    for (double& m : mean) m /= static_cast<double>(data.size());
    return mean;
}

}  // namespace

const char* rmse_scope_name(RmseScope scope) {
    return scope == RmseScope::EventsOnly ? "events-only" : "all";
}

RmseScope parse_rmse_scope(const std::string& name) {
    if (name == "events-only") return RmseScope::EventsOnly;
    if (name == "all") return RmseScope::All;
    throw ConfigError("unknown rmse scope '" + name + "'; valid scopes: events-only, all");
}

double rmse(std::span<const double> predictions, std::span<const SurvivalRecord> truth,
            RmseScope scope) {
    if (predictions.size() != truth.size())
        throw DomainError("rmse: prediction/record count mismatch");
    double ss = 0.0;
    size_t count = 0;
    for (size_t i = 0; i < truth.size(); ++i) {
        if (scope == RmseScope::EventsOnly && !truth[i].is_event()) continue;
        const double d = predictions[i] - truth[i].time;
        ss += d * d;
        ++count;
    }
    if (count == 0) throw DomainError("rmse: no records in scope");
    return std::sqrt(ss / static_cast<double>(count));
}

BenchReport run_benchmark(const Dataset& data, const BenchConfig& config) {
    if (config.methods.empty()) throw ConfigError("run_benchmark: no methods given");
    if (config.aggregations.empty()) throw ConfigError("run_benchmark: no aggregations given");

    const Dataset prepared =
        config.cause > 0 ? recode_for_cause(data, config.cause) : data;

    SplitPlan plan;
    plan.seed = config.seed;
    plan.test_fraction = config.test_fraction;
    plan.stratify_status = config.stratify;
    const auto [train, test] = train_test_split(prepared, plan);

    BenchReport report;
    report.config = config;
    report.profile_used = config.profile.empty() ? mean_covariates(test) : config.profile;
    if (report.profile_used.size() != prepared.num_features())
        throw ConfigError("run_benchmark: profile length does not match the covariate count");
    report.train_km = kaplan_meier(risk_table(train.records));

    using clock = std::chrono::steady_clock;
    for (Aggregation aggregation : config.aggregations) {
        for (Method method : config.methods) {
            ModelConfig mc = config.model;
            mc.method = method;
            mc.aggregation = aggregation;
            mc.seed = config.seed;

            const auto t0 = clock::now();
            FittedMethod fitted;
            if (is_boosted(method))
                fitted.boosted = fit_boosted(train, mc.boost_config());
            else
                fitted.forest = fit_forest(train, mc.forest_config());

            std::vector<double> train_preds(train.size()), test_preds(test.size());
            for (size_t i = 0; i < train.size(); ++i)
                train_preds[i] = fitted.predict(train.records[i].covariates, aggregation);
            for (size_t i = 0; i < test.size(); ++i)
                test_preds[i] = fitted.predict(test.records[i].covariates, aggregation);
            const auto t1 = clock::now();

            BenchRow row;
            row.method = method;
            row.aggregation = aggregation;
            row.train_rmse = rmse(train_preds, train.records, config.scope);
            row.test_rmse = rmse(test_preds, test.records, config.scope);
            row.seconds = std::chrono::duration<double>(t1 - t0).count();
            report.rows.push_back(row);

            report.curves.push_back(
                {std::string(method_name(method)) + "-" + aggregation_name(aggregation),
                 fitted.survival(report.profile_used)});
        }
    }
    return report;
}

std::string write_bench_outputs(const BenchReport& report, const std::string& out_root) {
    const std::string dir =
        out_root + "/" + report.config.dataset_id + "-seed" + std::to_string(report.config.seed);
    write_text_file(dir + "/report.json", bench_report_to_json(report).dump(2) + "\n");
    write_text_file(dir + "/report.csv", bench_report_to_csv(report));
    write_text_file(dir + "/km.csv", curve_to_csv(report.train_km));
    for (const auto& curve : report.curves)
        write_text_file(dir + "/" + curve.label + ".csv", curve_to_csv(curve.survival));
    return dir;
}

}  // namespace adasurv
