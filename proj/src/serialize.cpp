#include "adasurv/serialize.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "adasurv/error.hpp"

namespace adasurv {

namespace {

constexpr const char* kModelSchema = "adasurv.model";
constexpr int kModelVersion = 1;

const char* curve_kind_name(CurveKind kind) {
    switch (kind) {
        case CurveKind::Survival: return "survival";
        case CurveKind::CumulativeHazard: return "cumulative_hazard";
        case CurveKind::CumulativeIncidence: return "cumulative_incidence";
    }
    return "?";
}

CurveKind parse_curve_kind(const std::string& name) {
    if (name == "survival") return CurveKind::Survival;
    if (name == "cumulative_hazard") return CurveKind::CumulativeHazard;
    if (name == "cumulative_incidence") return CurveKind::CumulativeIncidence;
    throw ParseError("unknown curve kind '" + name + "'");
}

const char* split_variant_name(SplitVariant v) {
    return v == SplitVariant::RsfExhaustive ? "exhaustive" : "random";
}

SplitVariant parse_split_variant(const std::string& name) {
    if (name == "exhaustive") return SplitVariant::RsfExhaustive;
    if (name == "random") return SplitVariant::EsfRandom;
    throw ParseError("unknown split variant '" + name + "'");
}

const char* split_rule_name(SplitRule r) {
    return r == SplitRule::LogRank ? "logrank" : "logrank-score";
}

SplitRule parse_split_rule(const std::string& name) {
    if (name == "logrank") return SplitRule::LogRank;
    if (name == "logrank-score") return SplitRule::LogRankScore;
    throw ParseError("unknown split rule '" + name + "'");
}

const char* forest_variant_name(ForestVariant v) {
    return v == ForestVariant::Rsf ? "rsf" : "esf";
}

ForestVariant parse_forest_variant(const std::string& name) {
    if (name == "rsf") return ForestVariant::Rsf;
    if (name == "esf") return ForestVariant::Esf;
    throw ParseError("unknown forest variant '" + name + "'");
}

const char* boost_variation_name(BoostVariation v) {
    switch (v) {
        case BoostVariation::AdaRsf: return "ada-rsf";
        case BoostVariation::AdaEsf: return "ada-esf";
        case BoostVariation::AdaMix: return "ada-mix";
    }
    return "?";
}

BoostVariation parse_boost_variation(const std::string& name) {
    if (name == "ada-rsf") return BoostVariation::AdaRsf;
    if (name == "ada-esf") return BoostVariation::AdaEsf;
    if (name == "ada-mix") return BoostVariation::AdaMix;
    throw ParseError("unknown boosting variation '" + name + "'");
}

json growth_to_json(const GrowthConfig& g) {
    return json{{"variant", split_variant_name(g.variant)},
                {"rule", split_rule_name(g.rule)},
                {"mtry", g.mtry},
                {"random_cutpoints", g.random_cutpoints},
                {"d0", g.stopping.d0_reference},
                {"min_child_events", g.stopping.min_child_events},
                {"max_depth", g.stopping.max_depth},
                {"seed", g.seed}};
}

GrowthConfig growth_from_json(const json& j) {
    GrowthConfig g;
    g.variant = parse_split_variant(j.at("variant").get<std::string>());
    g.rule = parse_split_rule(j.at("rule").get<std::string>());
    g.mtry = j.at("mtry").get<int>();
    g.random_cutpoints = j.at("random_cutpoints").get<int>();
    g.stopping.d0_reference = j.at("d0").get<int>();
    g.stopping.min_child_events = j.at("min_child_events").get<int>();
    g.stopping.max_depth = j.at("max_depth").get<int>();
    g.seed = j.at("seed").get<uint64_t>();
    return g;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, ptr);
}

json curve_to_json(const SurvivalCurve& curve) {
    return json{{"kind", curve_kind_name(curve.kind)},
                {"times", curve.times},
                {"values", curve.values}};
}

SurvivalCurve curve_from_json(const json& j) {
    SurvivalCurve curve;
    curve.kind = parse_curve_kind(j.at("kind").get<std::string>());
    curve.times = j.at("times").get<std::vector<double>>();
    curve.values = j.at("values").get<std::vector<double>>();
    if (curve.times.size() != curve.values.size())
        throw ParseError("curve times/values length mismatch");
    return curve;
}

std::string curve_to_csv(const SurvivalCurve& curve) {
    std::string out = "time,value\n";
    for (size_t i = 0; i < curve.times.size(); ++i)
        out += format_double(curve.times[i]) + "," + format_double(curve.values[i]) + "\n";
    return out;
}

json tree_to_json(const SurvivalTree& tree) {
    json nodes = json::array();
    for (const auto& node : tree.nodes) {
        if (node.is_leaf()) {
            nodes.push_back(json{{"members", node.members},
                                 {"event_times", node.event_times},
                                 {"chf", curve_to_json(node.chf)},
                                 {"mode_time", node.mode_time}});
        } else {
            nodes.push_back(json{{"feature", node.feature},
                                 {"cutpoint", node.cutpoint},
                                 {"left", node.left},
                                 {"right", node.right}});
        }
    }
    return json{{"nodes", std::move(nodes)},
                {"meta", growth_to_json(tree.meta)},
                {"num_features", tree.num_features}};
}

SurvivalTree tree_from_json(const json& j) {
    SurvivalTree tree;
    tree.meta = growth_from_json(j.at("meta"));
    tree.num_features = j.at("num_features").get<int>();
    for (const auto& nj : j.at("nodes")) {
        TreeNode node;
        if (nj.contains("feature")) {
            node.feature = nj.at("feature").get<int>();
            node.cutpoint = nj.at("cutpoint").get<double>();
            node.left = nj.at("left").get<int>();
            node.right = nj.at("right").get<int>();
        } else {
            node.members = nj.at("members").get<std::vector<int>>();
            node.event_times = nj.at("event_times").get<std::vector<double>>();
            node.chf = curve_from_json(nj.at("chf"));
            node.mode_time = nj.at("mode_time").get<double>();
        }
        tree.nodes.push_back(std::move(node));
    }
    if (tree.nodes.empty()) throw ParseError("tree has no nodes");
    return tree;
}

json forest_to_json(const Forest& forest) {
    json trees = json::array();
    for (const auto& tree : forest.trees) trees.push_back(tree_to_json(tree));
    return json{{"variant", forest_variant_name(forest.variant)},
                {"ntree", forest.ntree},
                {"master_seed", forest.master_seed},
                {"vocabulary", forest.event_time_vocabulary},
                {"num_features", forest.num_features},
                {"trees", std::move(trees)}};
}

Forest forest_from_json(const json& j) {
    Forest forest;
    forest.variant = parse_forest_variant(j.at("variant").get<std::string>());
    forest.ntree = j.at("ntree").get<int>();
    forest.master_seed = j.at("master_seed").get<uint64_t>();
    forest.event_time_vocabulary = j.at("vocabulary").get<std::vector<double>>();
    forest.num_features = j.at("num_features").get<int>();
    for (const auto& tj : j.at("trees")) forest.trees.push_back(tree_from_json(tj));
    if (forest.trees.empty()) throw ParseError("forest has no trees");
    return forest;
}

json boosted_to_json(const BoostedEnsemble& ensemble) {
    json stages = json::array();
    for (const auto& stage : ensemble.stages) {
        stages.push_back(json{{"alpha", stage.alpha},
                              {"epsilon", stage.epsilon},
                              {"raw_epsilon", stage.raw_epsilon},
                              {"forest", forest_to_json(stage.learner)}});
    }
    return json{{"variation", boost_variation_name(ensemble.variation)},
                {"aggregation", aggregation_name(ensemble.aggregation)},
                {"tolerance", ensemble.tolerance},
                {"abs_tolerance", ensemble.abs_tolerance},
                {"vocabulary", ensemble.vocabulary},
                {"num_features", ensemble.num_features},
                {"stages", std::move(stages)}};
}

BoostedEnsemble boosted_from_json(const json& j) {
    BoostedEnsemble ensemble;
    ensemble.variation = parse_boost_variation(j.at("variation").get<std::string>());
    ensemble.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
    ensemble.tolerance = j.at("tolerance").get<double>();
    ensemble.abs_tolerance = j.at("abs_tolerance").get<double>();
    ensemble.vocabulary = j.at("vocabulary").get<std::vector<double>>();
    ensemble.num_features = j.at("num_features").get<int>();
    for (const auto& sj : j.at("stages")) {
        BoostStage stage;
        stage.learner = forest_from_json(sj.at("forest"));
        stage.alpha = sj.at("alpha").get<double>();
        stage.epsilon = sj.at("epsilon").get<double>();
        stage.raw_epsilon = sj.at("raw_epsilon").get<double>();
        ensemble.stages.push_back(std::move(stage));
    }
    if (ensemble.stages.empty()) throw ParseError("boosted ensemble has no stages");
    return ensemble;
}

json cause_specific_to_json(const CauseSpecificModel& model) {
    json j{{"cause", model.cause}, {"engine", method_name(model.engine)}};
    if (model.forest) j["forest"] = forest_to_json(*model.forest);
    if (model.boosted) j["boosted"] = boosted_to_json(*model.boosted);
    return j;
}

CauseSpecificModel cause_specific_from_json(const json& j) {
    CauseSpecificModel model;
    model.cause = j.at("cause").get<int>();
    model.engine = parse_method(j.at("engine").get<std::string>());
    if (j.contains("forest")) model.forest = forest_from_json(j.at("forest"));
    if (j.contains("boosted")) model.boosted = boosted_from_json(j.at("boosted"));
    if (!model.forest && !model.boosted)
        throw ParseError("cause-specific model holds neither a forest nor a boosted ensemble");
    return model;
}

json model_to_json(const ModelFile& model) {
    json encodings = json::array();
    for (size_t k = 0; k < model.feature_names.size(); ++k)
        encodings.push_back(k < model.encodings.size() ? model.encodings[k]
                                                       : std::vector<std::string>{});
    json j{{"schema", kModelSchema},
           {"version", kModelVersion},
           {"kind", model.kind},
           {"feature_names", model.feature_names},
           {"encodings", std::move(encodings)}};
    if (model.kind == "forest") {
        j["model"] = forest_to_json(*model.forest);
    } else if (model.kind == "boosted") {
        j["model"] = boosted_to_json(*model.boosted);
    } else if (model.kind == "cause_specific") {
        j["model"] = cause_specific_to_json(model.cause_models.at(0));
    } else if (model.kind == "cause_bundle") {
        json models = json::array();
        for (const auto& m : model.cause_models) models.push_back(cause_specific_to_json(m));
        j["models"] = std::move(models);
    } else {
        throw DomainError("model_to_json: unknown kind '" + model.kind + "'");
    }
    return j;
}

ModelFile model_from_json(const json& j) {
    if (!j.is_object() || j.value("schema", "") != kModelSchema)
        throw ParseError("not an adasurv model file (missing schema tag)");
    if (j.value("version", 0) != kModelVersion)
        throw ParseError("unsupported model file version");
    ModelFile model;
    model.kind = j.at("kind").get<std::string>();
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (j.contains("encodings"))
        model.encodings = j.at("encodings").get<std::vector<std::vector<std::string>>>();
    model.encodings.resize(model.feature_names.size());
    if (model.kind == "forest") {
        model.forest = forest_from_json(j.at("model"));
    } else if (model.kind == "boosted") {
        model.boosted = boosted_from_json(j.at("model"));
    } else if (model.kind == "cause_specific") {
        model.cause_models.push_back(cause_specific_from_json(j.at("model")));
    } else if (model.kind == "cause_bundle") {
        for (const auto& mj : j.at("models"))
            model.cause_models.push_back(cause_specific_from_json(mj));
    } else {
        throw ParseError("unknown model kind '" + model.kind + "'");
    }
    return model;
}

void write_model(const ModelFile& model, const std::string& path) {
    write_text_file(path, model_to_json(model).dump(2) + "\n");
}

ModelFile read_model(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const json::exception& e) {
        throw ParseError(path + ": malformed model file: " + e.what());
    }
}

json bench_report_to_json(const BenchReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back(json{{"method", method_name(row.method)},
                            {"aggregation", aggregation_name(row.aggregation)},
                            {"train_rmse", row.train_rmse},
                            {"test_rmse", row.test_rmse},
                            {"seconds", row.seconds}});
    }
    const auto& cfg = report.config;
    json methods = json::array();
    for (auto m : cfg.methods) methods.push_back(method_name(m));
    json aggregations = json::array();
    for (auto a : cfg.aggregations) aggregations.push_back(aggregation_name(a));
    return json{{"dataset", cfg.dataset_id},
                {"seed", cfg.seed},
                {"metadata",
                 json{{"methods", std::move(methods)},
                      {"aggregations", std::move(aggregations)},
                      {"iterations", cfg.model.iterations},
                      {"ntree", cfg.model.ntree},
                      {"mtry", cfg.model.mtry},
                      {"d0", cfg.model.stopping.d0_reference},
                      {"random_cutpoints", cfg.model.random_cutpoints},
                      {"tolerance", cfg.model.tolerance},
                      {"threads", cfg.model.threads},
                      {"test_fraction", cfg.test_fraction},
                      {"stratify", cfg.stratify},
                      {"rmse_scope", rmse_scope_name(cfg.scope)},
                      {"cause", cfg.cause},
                      {"time_unit", cfg.time_unit}}},
                {"profile", report.profile_used},
                {"rows", std::move(rows)}};
}

std::string bench_report_to_csv(const BenchReport& report) {
    std::string out = "method,aggregation,train_rmse,test_rmse,seconds\n";
    char seconds[32];
    for (const auto& row : report.rows) {
        std::snprintf(seconds, sizeof(seconds), "%.2f", row.seconds);
        out += std::string(method_name(row.method)) + "," + aggregation_name(row.aggregation) +
               "," + format_double(row.train_rmse) + "," + format_double(row.test_rmse) + "," +
               seconds + "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << contents;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace adasurv
