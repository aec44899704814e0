#pragma once

#include <span>
#include <string>
#include <vector>

#include "adasurv/competing.hpp"
#include "adasurv/dataset.hpp"
#include "adasurv/types.hpp"

namespace adasurv {

enum class RmseScope { EventsOnly, All };

const char* rmse_scope_name(RmseScope scope);
RmseScope parse_rmse_scope(const std::string& name);

// Root mean square error of predicted vs observed time over the in-scope
// records; EventsOnly restricts to uncensored records.
double rmse(std::span<const double> predictions, std::span<const SurvivalRecord> truth,
            RmseScope scope);

struct BenchConfig {
    std::string dataset_id;
    std::vector<Method> methods;
    std::vector<Aggregation> aggregations = {Aggregation::MeanOfMode};
    ModelConfig model;          // method/aggregation fields overridden per row
    double test_fraction = 0.3;
    bool stratify = true;
    RmseScope scope = RmseScope::EventsOnly;
    int cause = 0;              // 0 = not cause-specific
    std::string time_unit = "years";
    uint64_t seed = 0;
    std::vector<double> profile;  // curve evaluation point; empty = test-set mean
};

struct BenchRow {
    Method method = Method::Rsf;
    Aggregation aggregation = Aggregation::MeanOfMode;
    double train_rmse = 0.0;
    double test_rmse = 0.0;
    double seconds = 0.0;  // fit + full test-set predict, monotonic clock
};

struct MethodCurve {
    std::string label;
    SurvivalCurve survival;
};

struct BenchReport {
    BenchConfig config;
    std::vector<double> profile_used;
    std::vector<BenchRow> rows;
    SurvivalCurve train_km;              // reference Kaplan-Meier on the train split
    std::vector<MethodCurve> curves;     // per method x aggregation at the profile
};

// Fits every method x aggregation on an identical train/test split and
// identical seed, timing each fit + predict pass.
BenchReport run_benchmark(const Dataset& data, const BenchConfig& config);

// report.csv, report.json and one curve CSV per row under
// <out_root>/<dataset_id>-seed<seed>/.
std::string write_bench_outputs(const BenchReport& report, const std::string& out_root);

}  // namespace adasurv
