// adasurv command line: fit, predict, curves, bench.
//
// Exit codes: 0 ok, 2 usage/config/validation, 3 feature mismatch, 4 internal.
// Errors print as a single "error: ..." line on stderr.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adasurv/bench.hpp"
#include "adasurv/boosting.hpp"
#include "adasurv/competing.hpp"
#include "adasurv/dataset.hpp"
#include "adasurv/error.hpp"
#include "adasurv/estimators.hpp"
#include "adasurv/forest.hpp"
#include "adasurv/serialize.hpp"
#include "adasurv/threading.hpp"

namespace {

using namespace adasurv;

struct CommonFlags {
    std::string data_path;
    std::string time_col = "time";
    std::string status_col = "status";
    std::string cause_col;
    std::vector<std::string> covariates;
    std::vector<std::string> ignore;

    std::string method = "rsf";
    std::string aggregation = "mean-of-mode";
    std::string split_rule = "logrank";
    int ntree = 10;
    int iterations = 10;
    int mtry = 0;
    int d0 = 15;
    int min_child_events = 0;
    int max_depth = -1;
    int cutpoints = 1;
    double tau = 0.5;
    uint64_t seed = 0;
    int threads = 0;
    int cause = 0;
};

void add_schema_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--data", f.data_path, "input CSV file")->required();
    cmd->add_option("--time-col", f.time_col, "time column name");
    cmd->add_option("--status-col", f.status_col, "status column name");
    cmd->add_option("--cause-col", f.cause_col, "cause column name (competing risks)");
    cmd->add_option("--covariates", f.covariates,
                    "explicit covariate columns (default: all unmapped columns)")
        ->delimiter(',');
    cmd->add_option("--ignore-cols", f.ignore, "columns to skip entirely")->delimiter(',');
}

void add_model_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--method", f.method, "rsf, esf, ada-rsf, ada-esf or ada-mix");
    cmd->add_option("--aggregation", f.aggregation, "mean-of-mode or mapped-mean-of-mode");
    cmd->add_option("--split-rule", f.split_rule, "logrank or logrank-score");
    cmd->add_option("--ntree", f.ntree, "trees per forest")->check(CLI::PositiveNumber);
    cmd->add_option("--iterations", f.iterations, "boosting iterations K")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mtry", f.mtry, "features sampled per node (0 = ceil(sqrt(p)))");
    cmd->add_option("--d0", f.d0, "reference unique-event count for the stopping rule")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-child-events", f.min_child_events,
                    "unique-event floor per child (0 = derived from --d0)");
    cmd->add_option("--max-depth", f.max_depth, "tree depth cap (-1 = unlimited)");
    cmd->add_option("--cutpoints", f.cutpoints, "random cutpoints per feature (ESF)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau", f.tau, "correctness tolerance in event-time SDs");
    cmd->add_option("--seed", f.seed, "master 64-bit seed");
    cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    cmd->add_option("--cause", f.cause, "target cause label (competing risks)");
}

CsvSchema make_schema(const CommonFlags& f) {
    CsvSchema schema;
    schema.time_column = f.time_col;
    schema.status_column = f.status_col;
    schema.cause_column = f.cause_col;
    schema.covariates = f.covariates;
    schema.ignore = f.ignore;
    return schema;
}

ModelConfig make_model_config(const CommonFlags& f) {
    ModelConfig mc;
    mc.method = parse_method(f.method);
    mc.aggregation = parse_aggregation(f.aggregation);
    mc.ntree = f.ntree;
    mc.iterations = f.iterations;
    mc.mtry = f.mtry;
    mc.random_cutpoints = f.cutpoints;
    mc.stopping.d0_reference = f.d0;
    mc.stopping.min_child_events = f.min_child_events;
    mc.stopping.max_depth = f.max_depth;
    mc.tolerance = f.tau;
    mc.seed = f.seed;
    mc.threads = resolve_threads(f.threads);
    if (f.split_rule == "logrank")
        mc.rule = SplitRule::LogRank;
    else if (f.split_rule == "logrank-score")
        mc.rule = SplitRule::LogRankScore;
    else
        throw ConfigError("unknown split rule '" + f.split_rule +
                          "'; valid rules: logrank, logrank-score");
    return mc;
}

LoadResult load_with_warning(const std::string& path, const CsvSchema& schema) {
    auto result = load_csv(path, schema);
    if (result.dropped_rows > 0)
        std::cerr << "warning: dropped " << result.dropped_rows
                  << " rows with missing covariates\n";
    return result;
}

// ---- fit ----

int cmd_fit(const CommonFlags& flags, CLI::App* cmd, const std::string& out_dir) {
    const auto loaded = load_with_warning(flags.data_path, make_schema(flags));
    const Dataset& data = loaded.data;
    const ModelConfig mc = make_model_config(flags);

    ModelFile mf;
    mf.feature_names = data.feature_names;
    mf.encodings = loaded.encodings;
    if (flags.cause > 0 || data.competing_risk) {
        if (!data.competing_risk)
            throw ConfigError("--cause given but the dataset has no cause column");
        if (flags.cause > 0) {
            mf.kind = "cause_specific";
            mf.cause_models.push_back(fit_cause_specific(data, flags.cause, mc));
        } else {
            mf.kind = "cause_bundle";
            for (int cause : data.causes)
                mf.cause_models.push_back(fit_cause_specific(data, cause, mc));
        }
    } else if (is_boosted(mc.method)) {
        mf.kind = "boosted";
        mf.boosted = fit_boosted(data, mc.boost_config());
    } else {
        mf.kind = "forest";
        mf.forest = fit_forest(data, mc.forest_config());
    }

    write_model(mf, out_dir + "/model.json");
    write_text_file(out_dir + "/manifest.cfg", "[fit]\n" + cmd->config_to_str(true, true));
    std::cout << out_dir << "/model.json\n";
    return 0;
}

// ---- predict ----

std::vector<std::vector<double>> covariate_rows(const RawCsv& table, const ModelFile& model,
                                                const std::string& path) {
    std::vector<int> columns(model.feature_names.size(), -1);
    std::vector<std::string> missing;
    for (size_t k = 0; k < model.feature_names.size(); ++k) {
        for (size_t j = 0; j < table.header.size(); ++j)
            if (table.header[j] == model.feature_names[k]) columns[k] = static_cast<int>(j);
        if (columns[k] < 0) missing.push_back(model.feature_names[k]);
    }
    if (!missing.empty()) {
        std::vector<std::string> extra;
        std::set<std::string> wanted(model.feature_names.begin(), model.feature_names.end());
        for (const auto& name : table.header)
            if (!wanted.count(name)) extra.push_back(name);
        std::string msg = path + ": missing feature columns:";
        for (const auto& m : missing) msg += " " + m;
        if (!extra.empty()) {
            msg += "; extra input columns:";
            for (const auto& e : extra) msg += " " + e;
        }
        throw MismatchError(msg);
    }

    std::vector<std::vector<double>> rows;
    rows.reserve(table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r) {
        std::vector<double> x(columns.size());
        for (size_t k = 0; k < columns.size(); ++k) {
            const auto& cell = table.rows[r][columns[k]];
            const auto where =
                path + ": line " + std::to_string(table.row_lines[r]);
            if (csv_cell_missing(cell))
                throw MismatchError(where + ": missing value for feature '" +
                                    model.feature_names[k] + "'");
            if (const auto num = csv_cell_number(cell)) {
                x[k] = *num;
                continue;
            }
            const auto& codebook =
                k < model.encodings.size() ? model.encodings[k] : std::vector<std::string>{};
            const auto it = std::find(codebook.begin(), codebook.end(), cell);
            if (it == codebook.end())
                throw MismatchError(where + ": value '" + cell + "' for feature '" +
                                    model.feature_names[k] + "' is not numeric and was not seen "
                                    "during fitting");
            x[k] = static_cast<double>(it - codebook.begin());
        }
        rows.push_back(std::move(x));
    }
    return rows;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path, const std::string& aggregation_name) {
    const ModelFile model = read_model(model_path);
    const Aggregation aggregation = parse_aggregation(aggregation_name);
    const auto table = read_csv(data_path);
    const auto rows = covariate_rows(table, model, data_path);

    std::string out = "row";
    if (model.kind == "forest" || model.kind == "boosted") {
        out += ",prediction\n";
    } else {
        for (const auto& m : model.cause_models)
            out += ",prediction_cause_" + std::to_string(m.cause);
        out += "\n";
    }
    for (size_t r = 0; r < rows.size(); ++r) {
        out += std::to_string(r);
        if (model.kind == "forest")
            out += "," + format_double(predict_time(*model.forest, rows[r], aggregation));
        else if (model.kind == "boosted")
            out += "," + format_double(predict_boosted(*model.boosted, rows[r]));
        else
            for (const auto& m : model.cause_models)
                out += "," + format_double(m.predict(rows[r], aggregation));
        out += "\n";
    }
    write_text_file(out_path, out);
    std::cout << out_path << "\n";
    return 0;
}

// ---- curves ----

int cmd_curves(const CommonFlags& flags, const std::string& model_path,
               const std::string& profile_arg, bool km_only, const std::string& out_dir,
               bool have_data) {
    std::optional<LoadResult> loaded;
    if (have_data) loaded = load_with_warning(flags.data_path, make_schema(flags));

    if (!km_only && model_path.empty())
        throw ConfigError("curves needs --model, or --km-only with --data");
    if (km_only && !have_data) throw ConfigError("--km-only needs --data");

    if (have_data) {
        const Dataset& data = loaded->data;
        write_text_file(out_dir + "/km.csv",
                        curve_to_csv(kaplan_meier(risk_table(data.records))));
        if (data.competing_risk) {
            const auto curves = cause_curves(data);
            for (size_t c = 0; c < curves.causes.size(); ++c) {
                const auto tag = std::to_string(curves.causes[c]);
                write_text_file(out_dir + "/incidence-cause" + tag + ".csv",
                                curve_to_csv(curves.incidence[c]));
                write_text_file(out_dir + "/hazard-cause" + tag + ".csv",
                                curve_to_csv(curves.hazard[c]));
            }
        }
    }

    if (!km_only && !model_path.empty()) {
        const ModelFile model = read_model(model_path);
        std::vector<double> profile;
        if (profile_arg == "mean") {
            if (!have_data) throw ConfigError("--profile mean needs --data");
            profile.assign(model.num_features(), 0.0);
            for (const auto& r : loaded->data.records)
                for (size_t j = 0; j < profile.size(); ++j) profile[j] += r.covariates[j];
            for (double& v : profile) v /= static_cast<double>(loaded->data.size());
        } else {
            std::vector<std::string> parts = CLI::detail::split(profile_arg, ',');
            for (const auto& p : parts) {
                const auto num = csv_cell_number(p);
                if (!num) throw ConfigError("--profile must be 'mean' or a comma list of numbers");
                profile.push_back(*num);
            }
        }
        if (profile.size() != model.num_features())
            throw MismatchError("profile has " + std::to_string(profile.size()) +
                                " values but the model expects " +
                                std::to_string(model.num_features()));

        if (model.kind == "forest") {
            write_text_file(out_dir + "/model-survival.csv",
                            curve_to_csv(ensemble_survival(*model.forest, profile)));
            write_text_file(out_dir + "/model-chf.csv",
                            curve_to_csv(ensemble_chf(*model.forest, profile)));
        } else if (model.kind == "boosted") {
            write_text_file(out_dir + "/model-survival.csv",
                            curve_to_csv(boosted_survival(*model.boosted, profile)));
            write_text_file(out_dir + "/model-chf.csv",
                            curve_to_csv(boosted_chf(*model.boosted, profile)));
        } else {
            for (const auto& m : model.cause_models) {
                const auto tag = std::to_string(m.cause);
                write_text_file(out_dir + "/model-survival-cause" + tag + ".csv",
                                curve_to_csv(m.survival(profile)));
                write_text_file(out_dir + "/model-chf-cause" + tag + ".csv",
                                curve_to_csv(m.chf(profile)));
            }
        }
    }
    std::cout << out_dir << "\n";
    return 0;
}

// ---- bench ----

int cmd_bench(const CommonFlags& flags, const std::string& dataset_id,
              const std::vector<std::string>& methods,
              const std::vector<std::string>& aggregations, double test_fraction,
              bool no_stratify, const std::string& scope, const std::string& out_root,
              const std::string& time_unit) {
    const auto loaded = load_with_warning(flags.data_path, make_schema(flags));

    BenchConfig cfg;
    cfg.dataset_id = dataset_id;
    for (const auto& m : methods) cfg.methods.push_back(parse_method(m));
    cfg.aggregations.clear();
    for (const auto& a : aggregations) cfg.aggregations.push_back(parse_aggregation(a));
    cfg.model = make_model_config(flags);
    cfg.test_fraction = test_fraction;
    cfg.stratify = !no_stratify;
    cfg.scope = parse_rmse_scope(scope);
    cfg.cause = flags.cause;
    cfg.time_unit = time_unit;
    cfg.seed = flags.seed;

    const auto report = run_benchmark(loaded.data, cfg);
    const auto dir = write_bench_outputs(report, out_root);
    for (const auto& row : report.rows) {
        char seconds[32];
        std::snprintf(seconds, sizeof(seconds), "%.2f", row.seconds);
        std::cout << method_name(row.method) << " " << aggregation_name(row.aggregation)
                  << " train_rmse=" << format_double(row.train_rmse)
                  << " test_rmse=" << format_double(row.test_rmse) << " seconds=" << seconds
                  << " (" << time_unit << ")\n";
    }
    std::cout << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Survival forest ensembles with AdaBoost variations"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default(true);  // manifests carry resolved values
    app.set_config("--config", "",
                   "read options from a manifest ([subcommand] section, key=value lines)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    CommonFlags fit_flags, curve_flags, bench_flags;
    std::string fit_out = "adasurv-run";

    auto* fit = app.add_subcommand("fit", "fit a model and persist it as JSON");
    add_schema_flags(fit, fit_flags);
    add_model_flags(fit, fit_flags);
    fit->add_option("--out", fit_out, "output directory");
    fit->configurable(true);

    std::string predict_model, predict_data, predict_out = "predictions.csv";
    std::string predict_agg = "mean-of-mode";
    auto* predict = app.add_subcommand("predict", "predict times for a covariate CSV");
    predict->add_option("--model", predict_model, "model JSON file")->required();
    predict->add_option("--data", predict_data, "input CSV with the model's feature columns")
        ->required();
    predict->add_option("--out", predict_out, "output CSV path");
    predict->add_option("--aggregation", predict_agg, "aggregation for forest models");
    predict->configurable(true);

    std::string curves_model, curves_profile = "mean", curves_out = "curves";
    bool km_only = false;
    auto* curves = app.add_subcommand("curves", "emit survival/hazard/incidence step functions");
    curves->add_option("--model", curves_model, "model JSON file");
    curves->add_option("--data", curve_flags.data_path, "dataset CSV for KM/AJ curves");
    curves->add_option("--time-col", curve_flags.time_col, "time column name");
    curves->add_option("--status-col", curve_flags.status_col, "status column name");
    curves->add_option("--cause-col", curve_flags.cause_col, "cause column name");
    curves->add_option("--covariates", curve_flags.covariates, "explicit covariate columns")
        ->delimiter(',');
    curves->add_option("--ignore-cols", curve_flags.ignore, "columns to skip")->delimiter(',');
    curves->add_option("--profile", curves_profile, "'mean' or a comma list of covariate values");
    curves->add_flag("--km-only", km_only, "emit only the nonparametric curves");
    curves->add_option("--out", curves_out, "output directory");
    curves->configurable(true);

    std::string bench_id = "dataset", bench_scope = "events-only", bench_out = "bench";
    std::string bench_unit = "years";
    std::vector<std::string> bench_methods{"ada-rsf", "ada-esf", "ada-mix"};
    std::vector<std::string> bench_aggs{"mean-of-mode"};
    double bench_fraction = 0.3;
    bool bench_no_stratify = false;
    auto* bench = app.add_subcommand("bench", "train/test RMSE and timing per method");
    add_schema_flags(bench, bench_flags);
    add_model_flags(bench, bench_flags);
    bench->add_option("--dataset-id", bench_id, "label for the run directory");
    bench->add_option("--methods", bench_methods, "methods to compare")->delimiter(',');
    bench->add_option("--aggregations", bench_aggs, "aggregations to compare")->delimiter(',');
    bench->add_option("--test-fraction", bench_fraction, "test split fraction");
    bench->add_flag("--no-stratify", bench_no_stratify, "disable status-stratified splitting");
    bench->add_option("--rmse-scope", bench_scope, "events-only or all");
    bench->add_option("--time-unit", bench_unit, "time unit recorded in the report");
    bench->add_option("--out", bench_out, "output root directory");
    bench->configurable(true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (fit->parsed()) return cmd_fit(fit_flags, fit, fit_out);
        if (predict->parsed())
            return cmd_predict(predict_model, predict_data, predict_out, predict_agg);
        if (curves->parsed())
            return cmd_curves(curve_flags, curves_model, curves_profile, km_only, curves_out,
                              curves->count("--data") > 0);
        if (bench->parsed())
            return cmd_bench(bench_flags, bench_id, bench_methods, bench_aggs, bench_fraction,
                             bench_no_stratify, bench_scope, bench_out, bench_unit);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
