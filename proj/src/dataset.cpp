#include "adasurv/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "adasurv/error.hpp"
#include "adasurv/rng.hpp"
#include "adasurv/serialize.hpp"

namespace adasurv {

namespace {

// --- CSV reading, RFC-4180 subset (quoted fields, "" escapes, CRLF) ---

RawCsv read_csv_impl(const std::string& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("dataset file not found: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open dataset file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<std::vector<std::string>> rows;
    std::vector<size_t> row_lines;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool row_has_data = false;
    size_t line = 1;
    size_t row_line = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        if (fields.size() > 1 || !fields[0].empty() || row_has_data) {
            rows.push_back(std::move(fields));
            row_lines.push_back(row_line);
        }
        fields.clear();
        row_has_data = false;
        row_line = line;
    };

    size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
                ++i;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty())
                    throw ParseError(path + ": line " + std::to_string(line) +
                                     ": quote inside an unquoted field");
                in_quotes = true;
                row_has_data = true;
                ++i;
                break;
            case ',':
                end_field();
                row_has_data = true;
                ++i;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                [[fallthrough]];
            case '\n':
                ++line;
                end_row();
                ++i;
                break;
            default:
                field.push_back(c);
                ++i;
        }
    }
    if (in_quotes)
        throw ParseError(path + ": line " + std::to_string(line) +
                         ": unterminated quoted field");
    if (!field.empty() || !fields.empty()) {
        ++line;
        end_row();
    }

    if (rows.empty()) throw ParseError(path + ": missing header row");
    RawCsv table;
    table.header = std::move(rows.front());
    for (size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != table.header.size())
            throw ParseError(path + ": line " + std::to_string(row_lines[r]) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(rows[r].size()));
        table.rows.push_back(std::move(rows[r]));
        table.row_lines.push_back(row_lines[r]);
    }
    return table;
}

std::optional<Status> parse_status_cell(const std::string& cell) {
    if (cell == "1" || cell == "event" || cell == "TRUE") return Status::Event;
    if (cell == "0" || cell == "censored" || cell == "FALSE") return Status::Censored;
    return std::nullopt;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (size_t j = 0; j < header.size(); ++j)
        if (header[j] == name) return static_cast<int>(j);
    return -1;
}

void validate_dataset(const Dataset& data, const std::string& context) {
    bool any_event = false;
    for (const auto& r : data.records) any_event = any_event || r.is_event();
    if (!any_event)
        throw ValidationError(context + ": every record is censored; nothing can be fit");
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace

RawCsv read_csv(const std::string& path) { return read_csv_impl(path); }

bool csv_cell_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "N/A";
}

std::optional<double> csv_cell_number(const std::string& cell) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
}

LoadResult load_csv(const std::string& path, const CsvSchema& schema) {
    if (schema.time_column.empty() || schema.status_column.empty())
        throw ConfigError("schema must name a time column and a status column");
    const auto table = read_csv_impl(path);

    const int time_col = find_column(table.header, schema.time_column);
    if (time_col < 0) throw ConfigError(path + ": no column named '" + schema.time_column + "'");
    const int status_col = find_column(table.header, schema.status_column);
    if (status_col < 0)
        throw ConfigError(path + ": no column named '" + schema.status_column + "'");
    int cause_col = -1;
    if (!schema.cause_column.empty()) {
        cause_col = find_column(table.header, schema.cause_column);
        if (cause_col < 0)
            throw ConfigError(path + ": no column named '" + schema.cause_column + "'");
    }

    std::vector<int> covariate_cols;
    if (!schema.covariates.empty()) {
        for (const auto& name : schema.covariates) {
            const int j = find_column(table.header, name);
            if (j < 0) throw ConfigError(path + ": no covariate column named '" + name + "'");
            covariate_cols.push_back(j);
        }
    } else {
        std::set<std::string> skip(schema.ignore.begin(), schema.ignore.end());
        for (size_t j = 0; j < table.header.size(); ++j) {
            if (static_cast<int>(j) == time_col || static_cast<int>(j) == status_col ||
                static_cast<int>(j) == cause_col || skip.count(table.header[j]))
                continue;
            covariate_cols.push_back(static_cast<int>(j));
        }
    }

    // a covariate column is categorical when any non-missing cell is non-numeric
    std::vector<bool> categorical(covariate_cols.size(), false);
    for (size_t k = 0; k < covariate_cols.size(); ++k) {
        for (const auto& row : table.rows) {
            const auto& cell = row[covariate_cols[k]];
            if (!csv_cell_missing(cell) && !csv_cell_number(cell)) {
                categorical[k] = true;
                break;
            }
        }
    }
    std::vector<std::map<std::string, double>> codes(covariate_cols.size());
    for (size_t k = 0; k < covariate_cols.size(); ++k) {
        if (!categorical[k]) continue;
        for (const auto& row : table.rows) {
            const auto& cell = row[covariate_cols[k]];
            if (!csv_cell_missing(cell) && !codes[k].count(cell))
                codes[k].emplace(cell, static_cast<double>(codes[k].size()));
        }
    }

    LoadResult result;
    Dataset& data = result.data;
    data.competing_risk = cause_col >= 0;
    for (int j : covariate_cols) data.feature_names.push_back(table.header[j]);
    result.encodings.resize(covariate_cols.size());
    for (size_t k = 0; k < covariate_cols.size(); ++k) {
        if (!categorical[k]) continue;
        result.encodings[k].resize(codes[k].size());
        for (const auto& [category, code] : codes[k])
            result.encodings[k][static_cast<size_t>(code)] = category;
    }

    std::set<int> cause_set;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto where = path + ": line " + std::to_string(table.row_lines[r]);

        const auto& time_cell = row[time_col];
        if (csv_cell_missing(time_cell)) throw ValidationError(where + ": missing time value");
        const auto time = csv_cell_number(time_cell);
        if (!time) throw ValidationError(where + ": non-numeric time '" + time_cell + "'");
        if (!(*time > 0.0) || !std::isfinite(*time))
            throw ValidationError(where + ": time must be positive and finite, got " + time_cell);

        const auto& status_cell = row[status_col];
        if (csv_cell_missing(status_cell)) throw ValidationError(where + ": missing status value");
        const auto status = parse_status_cell(status_cell);
        if (!status)
            throw ValidationError(where + ": unknown status symbol '" + status_cell +
                                  "'; accepted: 1, 0, event, censored, TRUE, FALSE");

        int cause = 0;
        if (cause_col >= 0) {
            const auto& cause_cell = row[cause_col];
            if (!csv_cell_missing(cause_cell)) {
                const auto parsed = csv_cell_number(cause_cell);
                if (!parsed || *parsed != std::floor(*parsed) || *parsed < 0)
                    throw ValidationError(where + ": cause label must be a nonnegative integer, got '" +
                                          cause_cell + "'");
                cause = static_cast<int>(*parsed);
            }
            if (*status == Status::Censored && cause != 0)
                throw ValidationError(where + ": censored record carries cause " +
                                      std::to_string(cause));
            if (*status == Status::Event && cause == 0)
                throw ValidationError(where + ": event record carries no cause label");
        }

        SurvivalRecord rec;
        rec.time = *time;
        rec.status = *status;
        rec.cause = cause;
        rec.covariates.reserve(covariate_cols.size());
        bool dropped = false;
        for (size_t k = 0; k < covariate_cols.size(); ++k) {
            const auto& cell = row[covariate_cols[k]];
            if (csv_cell_missing(cell)) {
                dropped = true;
                break;
            }
            rec.covariates.push_back(categorical[k] ? codes[k].at(cell) : *csv_cell_number(cell));
        }
        if (dropped) {
            ++result.dropped_rows;
            continue;
        }
        if (cause > 0) cause_set.insert(cause);
        data.records.push_back(std::move(rec));
    }

    data.causes.assign(cause_set.begin(), cause_set.end());
    validate_dataset(data, path);
    return result;
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write dataset file: " + path);
    for (const auto& name : data.feature_names) out << csv_escape(name) << ',';
    out << "time,status";
    if (data.competing_risk) out << ",cause";
    out << '\n';
    for (const auto& r : data.records) {
        for (double v : r.covariates) out << format_double(v) << ',';
        out << format_double(r.time) << ',' << (r.is_event() ? '1' : '0');
        if (data.competing_risk) out << ',' << r.cause;
        out << '\n';
    }
}

Dataset derive_cause_labels(const Dataset& raw, const CauseRule& rule) {
    if (rule.indicators.empty())
        throw ConfigError("derive_cause_labels: the rule names no indicator columns");
    std::vector<int> indicator_idx;
    std::set<int> labels;
    for (const auto& [column, label] : rule.indicators) {
        const auto it = std::find(raw.feature_names.begin(), raw.feature_names.end(), column);
        if (it == raw.feature_names.end())
            throw ConfigError("derive_cause_labels: no covariate column named '" + column + "'");
        if (label <= 0 || !labels.insert(label).second)
            throw ConfigError("derive_cause_labels: cause labels must be positive and distinct");
        indicator_idx.push_back(static_cast<int>(it - raw.feature_names.begin()));
    }

    std::set<int> indicator_set(indicator_idx.begin(), indicator_idx.end());
    Dataset out;
    out.competing_risk = true;
    for (size_t j = 0; j < raw.feature_names.size(); ++j)
        if (!indicator_set.count(static_cast<int>(j))) out.feature_names.push_back(raw.feature_names[j]);

    std::set<int> observed;
    out.records.reserve(raw.size());
    for (const auto& r : raw.records) {
        SurvivalRecord rec;
        rec.time = r.time;
        rec.status = Status::Censored;
        rec.cause = 0;
        for (size_t k = 0; k < indicator_idx.size(); ++k) {
            if (r.covariates[indicator_idx[k]] != 0.0) {
                rec.status = Status::Event;
                rec.cause = rule.indicators[k].second;
                observed.insert(rec.cause);
                break;  // precedence order decides multi-cause records
            }
        }
        for (size_t j = 0; j < raw.feature_names.size(); ++j)
            if (!indicator_set.count(static_cast<int>(j))) rec.covariates.push_back(r.covariates[j]);
        out.records.push_back(std::move(rec));
    }
    out.causes.assign(observed.begin(), observed.end());
    validate_dataset(out, "derive_cause_labels");
    return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data, const SplitPlan& plan) {
    const size_t n = data.size();
    if (n < 2) throw ConfigError("train_test_split: need at least 2 records");
    if (!(plan.test_fraction > 0.0) || !(plan.test_fraction < 1.0))
        throw ConfigError("train_test_split: test_fraction must lie strictly in (0, 1)");

    size_t total_test =
        static_cast<size_t>(std::ceil(static_cast<double>(n) * plan.test_fraction));
    total_test = std::clamp<size_t>(total_test, 1, n - 1);

    std::vector<std::vector<int>> strata;
    if (plan.stratify_status) {
        strata.resize(2);  // events, then censored
        for (size_t i = 0; i < n; ++i)
            strata[data.records[i].is_event() ? 0 : 1].push_back(static_cast<int>(i));
        std::erase_if(strata, [](const auto& s) { return s.empty(); });
    } else {
        strata.emplace_back();
        for (size_t i = 0; i < n; ++i) strata[0].push_back(static_cast<int>(i));
    }

    Rng rng(derive_seed(plan.seed, "train-test-split"));
    for (auto& stratum : strata) {
        for (size_t i = stratum.size(); i > 1; --i)
            std::swap(stratum[i - 1], stratum[rng.next_below(static_cast<int>(i))]);
    }

    // largest-remainder allocation of the test quota across strata
    std::vector<size_t> take(strata.size());
    std::vector<double> remainder(strata.size());
    size_t assigned = 0;
    for (size_t s = 0; s < strata.size(); ++s) {
        const double quota = static_cast<double>(strata[s].size()) * plan.test_fraction;
        take[s] = std::min<size_t>(static_cast<size_t>(std::floor(quota)), strata[s].size());
        remainder[s] = quota - std::floor(quota);
        assigned += take[s];
    }
    std::vector<size_t> order(strata.size());
    for (size_t s = 0; s < order.size(); ++s) order[s] = s;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        return a < b;
    });
    while (assigned < total_test) {
        bool progressed = false;
        for (size_t s : order) {
            if (assigned == total_test) break;
            if (take[s] < strata[s].size()) {
                ++take[s];
                ++assigned;
                progressed = true;
            }
        }
        if (!progressed) break;
    }
    while (assigned > total_test) {
        for (auto it = order.rbegin(); it != order.rend() && assigned > total_test; ++it) {
            if (take[*it] > 0) {
                --take[*it];
                --assigned;
            }
        }
    }

    std::vector<char> in_test(n, 0);
    for (size_t s = 0; s < strata.size(); ++s)
        for (size_t k = 0; k < take[s]; ++k) in_test[strata[s][k]] = 1;

    Dataset train, test;
    train.feature_names = test.feature_names = data.feature_names;
    train.competing_risk = test.competing_risk = data.competing_risk;
    train.causes = test.causes = data.causes;
    for (size_t i = 0; i < n; ++i)
        (in_test[i] ? test : train).records.push_back(data.records[i]);
    return {std::move(train), std::move(test)};
}

}  // namespace adasurv
