#include "dianet/cohort.hpp"

#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "dianet/csv.hpp"
#include "dianet/errors.hpp"

namespace dianet {

void FeatureSchema::validate() const {
    if (crf_features.size() != 6 || ecg_features.size() != 6) {
        throw SchemaError("schema must have exactly 6 CRF and 6 ECG features");
    }
    std::unordered_set<std::string> names;
    std::size_t categorical = 0;
    for (const auto& f : all_features()) {
        if (!names.insert(f.name).second) {
            throw SchemaError("duplicate feature name: " + f.name);
        }
        if (f.kind == FeatureKind::Categorical) {
            ++categorical;
            if (f.name != "sex") {
                throw SchemaError("sex is the only categorical feature, got: " + f.name);
            }
        }
    }
    if (categorical != 1) {
        throw SchemaError("schema must have exactly one categorical feature (sex)");
    }
}

std::vector<FeatureDesc> FeatureSchema::all_features() const {
    std::vector<FeatureDesc> all = crf_features;
    all.insert(all.end(), ecg_features.begin(), ecg_features.end());
    return all;
}

std::vector<FeatureKind> FeatureSchema::crf_kinds() const {
    std::vector<FeatureKind> kinds;
    for (const auto& f : crf_features) kinds.push_back(f.kind);
    return kinds;
}

std::vector<FeatureKind> FeatureSchema::ecg_kinds() const {
    std::vector<FeatureKind> kinds;
    for (const auto& f : ecg_features) kinds.push_back(f.kind);
    return kinds;
}

FeatureSchema default_schema() {
    FeatureSchema s;
    s.crf_features = {
        {"age", FeatureKind::Continuous},
        {"sex", FeatureKind::Categorical},
        {"bmi", FeatureKind::Continuous},
        {"waist_cm", FeatureKind::Continuous},
        {"systolic_bp", FeatureKind::Continuous},
        {"diastolic_bp", FeatureKind::Continuous},
    };
    s.ecg_features = {
        {"qrs_duration", FeatureKind::Continuous},
        {"qt_interval", FeatureKind::Continuous},
        {"qt_corrected", FeatureKind::Continuous},
        {"pr_interval", FeatureKind::Continuous},
        {"avg_rr_interval", FeatureKind::Continuous},
        {"t_axis", FeatureKind::Continuous},
    };
    s.validate();
    return s;
}

namespace {

std::optional<double> parse_cell(const std::string& cell, const std::string& column,
                                 std::size_t row_index) {
    if (cell.empty() || cell == "NA") return std::nullopt;
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError("non-numeric value '" + cell + "' in column " + column +
                         " at row " + std::to_string(row_index));
    }
    return value;
}

}  // namespace

Cohort load_cohort(const std::string& path, const FeatureSchema& schema) {
    schema.validate();
    const CsvTable table = read_csv(path);

    std::unordered_map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (!col_index.emplace(table.header[i], i).second) {
            throw SchemaError("duplicate column: " + table.header[i]);
        }
    }
    auto require = [&col_index](const std::string& name) {
        auto it = col_index.find(name);
        if (it == col_index.end()) throw SchemaError("missing column: " + name);
        return it->second;
    };

    const std::size_t id_col = require("id");
    const std::size_t label_col = require("label");
    const auto features = schema.all_features();
    std::vector<std::size_t> feature_cols;
    for (const auto& f : features) feature_cols.push_back(require(f.name));

    Cohort cohort;
    cohort.schema = schema;
    cohort.rows.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        if (cells.size() != table.header.size()) {
            throw ParseError("row " + std::to_string(r + 1) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(table.header.size()));
        }
        Record rec;
        rec.id = cells[id_col];
        rec.values.reserve(features.size());
        for (std::size_t f = 0; f < features.size(); ++f) {
            rec.values.push_back(parse_cell(cells[feature_cols[f]], features[f].name, r + 1));
        }
        const std::string& label_cell = cells[label_col];
        if (label_cell == "0") {
            rec.label = 0;
        } else if (label_cell == "1") {
            rec.label = 1;
        } else {
            throw LabelError("label '" + label_cell + "' outside {0,1} at row " +
                             std::to_string(r + 1));
        }
        cohort.rows.push_back(std::move(rec));
    }
    if (cohort.rows.empty()) throw ParseError("cohort has no rows: " + path);
    return cohort;
}

void save_cohort(const std::string& path, const Cohort& cohort) {
    CsvTable table;
    table.header.push_back("id");
    for (const auto& f : cohort.schema.all_features()) table.header.push_back(f.name);
    table.header.push_back(cohort.label_name);

    table.rows.reserve(cohort.rows.size());
    for (const auto& rec : cohort.rows) {
        std::vector<std::string> cells;
        cells.push_back(rec.id);
        for (const auto& v : rec.values) {
            cells.push_back(v ? format_double(*v) : std::string());
        }
        cells.push_back(std::to_string(rec.label));
        table.rows.push_back(std::move(cells));
    }
    write_csv(path, table);
}

Modalities split_modalities(const Cohort& cohort) {
    if (cohort.rows.empty()) throw DimensionError("split_modalities: empty cohort");
    const std::size_t crf_n = cohort.schema.crf_features.size();
    const std::size_t ecg_n = cohort.schema.ecg_features.size();

    Modalities m;
    m.crf.reserve(cohort.rows.size());
    m.ecg.reserve(cohort.rows.size());
    m.labels.reserve(cohort.rows.size());
    for (const auto& rec : cohort.rows) {
        m.crf.emplace_back(rec.values.begin(), rec.values.begin() + crf_n);
        m.ecg.emplace_back(rec.values.begin() + crf_n, rec.values.begin() + crf_n + ecg_n);
        m.labels.push_back(rec.label);
    }
    return m;
}

}  // namespace dianet
