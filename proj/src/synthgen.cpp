#include "dianet/synthgen.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "dianet/errors.hpp"
#include "dianet/rng.hpp"

namespace dianet {

void GenConfig::validate() const {
    if (n < 1) throw ConfigError("generator needs n >= 1");
    if (prevalence <= 0.0 || prevalence >= 1.0) {
        throw ConfigError("prevalence must lie in (0,1)");
    }
    if (features.size() != 11) {
        throw ConfigError("generator expects the 11 continuous schema features");
    }
    for (const auto& f : features) {
        if (f.sd <= 0.0) throw ConfigError("feature sd must be > 0: " + f.name);
    }
    if (male_fraction < 0.0 || male_fraction > 1.0) {
        throw ConfigError("male_fraction must lie in [0,1]");
    }
    if (missing_rate < 0.0 || missing_rate >= 0.5 || outlier_rate < 0.0 || outlier_rate >= 0.5) {
        throw ConfigError("corruption rates must lie in [0, 0.5)");
    }
}

Cohort generate_cohort(const GenConfig& config) {
    config.validate();
    Cohort cohort;
    cohort.schema = default_schema();
    const auto features = cohort.schema.all_features();

    Rng rng(config.seed);
    cohort.rows.reserve(config.n);
    char id_buf[32];
    for (std::size_t row = 0; row < config.n; ++row) {
        Record rec;
        std::snprintf(id_buf, sizeof(id_buf), "%s%06zu", config.id_prefix.c_str(), row + 1);
        rec.id = id_buf;
        rec.label = rng.next_bernoulli(config.prevalence) ? 1 : 0;

        rec.values.reserve(features.size());
        std::size_t cont = 0;  // cursor into config.features
        for (const auto& f : features) {
            if (f.kind == FeatureKind::Categorical) {
                rec.values.emplace_back(rng.next_bernoulli(config.male_fraction) ? 1.0 : 0.0);
            } else {
                const FeatureGen& g = config.features[cont++];
                const double mu = g.mean + static_cast<double>(rec.label) * g.effect * g.sd;
                rec.values.emplace_back(rng.next_normal(mu, g.sd));
            }
        }

        for (std::size_t c = 0; c < features.size(); ++c) {
            if (config.missing_rate > 0.0 && rng.next_bernoulli(config.missing_rate)) {
                rec.values[c].reset();
                continue;
            }
            if (features[c].kind == FeatureKind::Continuous && config.outlier_rate > 0.0 &&
                rng.next_bernoulli(config.outlier_rate)) {
                *rec.values[c] *= config.outlier_factor;
            }
        }
        cohort.rows.push_back(std::move(rec));
    }
    return cohort;
}

namespace {

// effect sizes in SD units; anthropometric factors carry the strongest
// signal, blood pressure moderate, ECG features a weaker but real signal
// calibrated so fusion improves on the clinical branch
constexpr double kAgeEffect = 0.8;
constexpr double kBmiEffect = 0.8;
constexpr double kWaistEffect = 0.8;
constexpr double kBpEffect = 0.4;
constexpr double kEcgEffect = 0.45;

std::vector<FeatureGen> development_features() {
    return {
        {"age", 46.59, 14.80, kAgeEffect},
        {"bmi", 27.86, 6.71, kBmiEffect},
        {"waist_cm", 88.22, 16.04, kWaistEffect},
        {"systolic_bp", 118.37, 18.92, kBpEffect},
        {"diastolic_bp", 65.64, 10.00, kBpEffect},
        {"qrs_duration", 94.17, 12.49, kEcgEffect},
        {"qt_interval", 389.30, 27.22, kEcgEffect},
        {"qt_corrected", 403.14, 20.25, kEcgEffect},
        {"pr_interval", 163.29, 23.09, kEcgEffect},
        {"avg_rr_interval", 899.17, 138.42, kEcgEffect},
        {"t_axis", 38.01, 25.98, kEcgEffect},
    };
}

std::vector<FeatureGen> test_features() {
    return {
        {"age", 37.59, 11.45, kAgeEffect},
        {"bmi", 28.84, 5.83, kBmiEffect},
        {"waist_cm", 88.67, 14.79, kWaistEffect},
        {"systolic_bp", 112.22, 13.40, kBpEffect},
        {"diastolic_bp", 66.32, 10.62, kBpEffect},
        {"qrs_duration", 94.51, 10.57, kEcgEffect},
        {"qt_interval", 390.59, 26.13, kEcgEffect},
        {"qt_corrected", 400.35, 18.46, kEcgEffect},
        {"pr_interval", 159.73, 21.00, kEcgEffect},
        {"avg_rr_interval", 927.10, 130.37, kEcgEffect},
        {"t_axis", 32.04, 20.88, kEcgEffect},
    };
}

}  // namespace

std::pair<GenConfig, GenConfig> default_scenario(std::uint64_t seed) {
    GenConfig dev;
    dev.n = 2043;
    dev.prevalence = 1107.0 / 2043.0;
    dev.features = development_features();
    dev.male_fraction = 1396.0 / 2043.0;
    dev.missing_rate = 0.02;
    dev.outlier_rate = 0.01;
    dev.seed = derive_seed(seed, 3);
    dev.id_prefix = "dev-";

    GenConfig test;
    test.n = 395;
    test.prevalence = 140.0 / 395.0;
    test.features = test_features();
    test.male_fraction = 208.0 / 395.0;
    test.missing_rate = 0.02;
    test.outlier_rate = 0.01;
    test.seed = derive_seed(seed, 4);
    test.id_prefix = "test-";

    return {dev, test};
}

std::pair<GenConfig, GenConfig> null_scenario(std::uint64_t seed) {
    auto [dev, test] = default_scenario(seed);
    for (auto& f : dev.features) f.effect = 0.0;
    for (auto& f : test.features) f.effect = 0.0;
    return {dev, test};
}

nlohmann::json gen_config_to_json(const GenConfig& config) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& f : config.features) {
        features.push_back(nlohmann::json{
            {"name", f.name}, {"mean", f.mean}, {"sd", f.sd}, {"effect", f.effect}});
    }
    return nlohmann::json{{"n", config.n},
                          {"prevalence", config.prevalence},
                          {"features", std::move(features)},
                          {"male_fraction", config.male_fraction},
                          {"missing_rate", config.missing_rate},
                          {"outlier_rate", config.outlier_rate},
                          {"outlier_factor", config.outlier_factor},
                          {"seed", config.seed},
                          {"id_prefix", config.id_prefix}};
}

GenConfig gen_config_from_json(const nlohmann::json& j) {
    GenConfig config;
    config.n = j.at("n");
    config.prevalence = j.at("prevalence");
    for (const auto& f : j.at("features")) {
        config.features.push_back(
            {f.at("name"), f.at("mean"), f.at("sd"), f.value("effect", 0.0)});
    }
    config.male_fraction = j.at("male_fraction");
    config.missing_rate = j.value("missing_rate", 0.0);
    config.outlier_rate = j.value("outlier_rate", 0.0);
    config.outlier_factor = j.value("outlier_factor", 5.0);
    config.seed = j.value("seed", 0ULL);
    config.id_prefix = j.value("id_prefix", std::string("s"));
    config.validate();
    return config;
}

}  // namespace dianet
