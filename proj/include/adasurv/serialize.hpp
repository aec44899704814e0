#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adasurv/bench.hpp"
#include "adasurv/boosting.hpp"
#include "adasurv/competing.hpp"
#include "adasurv/forest.hpp"
#include "adasurv/types.hpp"

namespace adasurv {

using json = nlohmann::json;

json curve_to_json(const SurvivalCurve& curve);
SurvivalCurve curve_from_json(const json& j);
std::string curve_to_csv(const SurvivalCurve& curve);  // time,value rows

json tree_to_json(const SurvivalTree& tree);
SurvivalTree tree_from_json(const json& j);

json forest_to_json(const Forest& forest);
Forest forest_from_json(const json& j);

json boosted_to_json(const BoostedEnsemble& ensemble);
BoostedEnsemble boosted_from_json(const json& j);

json cause_specific_to_json(const CauseSpecificModel& model);
CauseSpecificModel cause_specific_from_json(const json& j);

// Versioned envelope around one model of any kind. `kind` is one of
// "forest", "boosted", "cause_specific", "cause_bundle".
struct ModelFile {
    std::string kind;
    std::optional<Forest> forest;
    std::optional<BoostedEnsemble> boosted;
    std::vector<CauseSpecificModel> cause_models;
    std::vector<std::string> feature_names;
    // per feature: category strings by integer code; empty for numeric columns
    std::vector<std::vector<std::string>> encodings;

    size_t num_features() const { return feature_names.size(); }
};

json model_to_json(const ModelFile& model);
ModelFile model_from_json(const json& j);
void write_model(const ModelFile& model, const std::string& path);
ModelFile read_model(const std::string& path);  // throws ParseError on bad schema

json bench_report_to_json(const BenchReport& report);
std::string bench_report_to_csv(const BenchReport& report);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

}  // namespace adasurv
