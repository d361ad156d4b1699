#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dianet {

enum class FeatureKind { Continuous, Categorical };

struct FeatureDesc {
    std::string name;
    FeatureKind kind = FeatureKind::Continuous;
};

// Two-modality feature schema: six clinical risk factors and six ECG-derived
// scalars. Sex is the single categorical feature (0 = female, 1 = male).
struct FeatureSchema {
    std::vector<FeatureDesc> crf_features;
    std::vector<FeatureDesc> ecg_features;

    // Throws SchemaError if the 6+6 structure or naming rules are violated.
    void validate() const;

    std::size_t size() const { return crf_features.size() + ecg_features.size(); }

    // All features in canonical order (CRF block then ECG block).
    std::vector<FeatureDesc> all_features() const;

    std::vector<FeatureKind> crf_kinds() const;
    std::vector<FeatureKind> ecg_kinds() const;
};

// The canonical schema: age, sex, bmi, waist_cm, systolic_bp, diastolic_bp |
// qrs_duration, qt_interval, qt_corrected, pr_interval, avg_rr_interval, t_axis.
FeatureSchema default_schema();

struct Record {
    std::string id;
    std::vector<std::optional<double>> values;  // schema order
    int label = 0;                              // 1 = T2DM / incident T2DM
};

struct Cohort {
    FeatureSchema schema;
    std::vector<Record> rows;
    std::string label_name = "label";
};

using MaybeMatrix = std::vector<std::vector<std::optional<double>>>;
using Matrix = std::vector<std::vector<double>>;

struct Modalities {
    MaybeMatrix crf;               // n x 6, schema order
    MaybeMatrix ecg;               // n x 6, schema order
    std::vector<int> labels;       // aligned with cohort rows
};

// Reads a cohort CSV. The header must contain an id column, a label column
// and one column per schema feature; column order in the file is free.
// Empty cells and "NA" are missing. Labels must parse as 0 or 1.
Cohort load_cohort(const std::string& path, const FeatureSchema& schema);

// Writes the canonical CSV layout (id, features in schema order, label).
void save_cohort(const std::string& path, const Cohort& cohort);

Modalities split_modalities(const Cohort& cohort);

}  // namespace dianet
