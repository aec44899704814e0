#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adasurv/types.hpp"

namespace adasurv {

// Column-role map for load_csv. Empty covariates means "every column not
// otherwise mapped, in file order". Categorical covariate columns are
// integer-encoded by first appearance.
struct CsvSchema {
    std::string time_column;
    std::string status_column;
    std::string cause_column;               // optional; empty = not competing
    std::vector<std::string> covariates;    // optional explicit selection
    std::vector<std::string> ignore;        // columns to skip (ids etc.)
};

struct LoadResult {
    Dataset data;
    size_t dropped_rows = 0;  // rows dropped for missing covariate cells
    // per feature: category strings by integer code; empty for numeric columns
    std::vector<std::vector<std::string>> encodings;
};

LoadResult load_csv(const std::string& path, const CsvSchema& schema);

// Header + rows of an arbitrary CSV (RFC-4180 subset), with 1-based source
// line numbers per row. Used by the predict path, which has no schema.
struct RawCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<size_t> row_lines;
};

RawCsv read_csv(const std::string& path);

bool csv_cell_missing(const std::string& cell);
std::optional<double> csv_cell_number(const std::string& cell);

// Inverse of load_csv for the canonical layout: covariates, time, status
// (1/0) and, for competing-risk data, cause. Times round-trip bitwise.
void save_csv(const Dataset& data, const std::string& path);

// Ordered indicator-column -> cause-label rule for raw exports that carry
// per-cause event indicators instead of a cause column. The first indicator
// that fires decides the cause; none firing means censored. Indicator
// columns are removed from the covariates.
struct CauseRule {
    std::vector<std::pair<std::string, int>> indicators;
};

Dataset derive_cause_labels(const Dataset& raw, const CauseRule& rule);

struct SplitPlan {
    uint64_t seed = 0;
    double test_fraction = 0.3;
    bool stratify_status = true;
};

// Deterministic exhaustive partition into (train, test); the test side gets
// ceil(n * fraction) records, clamped so both sides are nonempty. With
// stratification the split is done per status stratum.
std::pair<Dataset, Dataset> train_test_split(const Dataset& data, const SplitPlan& plan);

}  // namespace adasurv
