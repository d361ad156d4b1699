#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dianet/cohort.hpp"

namespace dianet {

// Generation parameters for one continuous feature: marginal mean/SD plus a
// label-conditional mean shift expressed in SD units.
struct FeatureGen {
    std::string name;
    double mean = 0.0;
    double sd = 1.0;
    double effect = 0.0;
};

struct GenConfig {
    std::size_t n = 0;
    double prevalence = 0.5;
    std::vector<FeatureGen> features;  // continuous features, schema order
    double male_fraction = 0.5;        // sex ~ Bernoulli(male_fraction)
    double missing_rate = 0.0;
    double outlier_rate = 0.0;
    double outlier_factor = 5.0;  // corrupted value = value * factor
    std::uint64_t seed = 0;
    std::string id_prefix = "s";

    void validate() const;
};

// Draw order per row: label, then features in schema order (sex as a
// Bernoulli, continuous as Normal(mean + label*effect*sd, sd)), then one
// corruption pass per feature (missingness first, outlier second).
Cohort generate_cohort(const GenConfig& config);

// Development and longitudinal-test configurations at the published cohort
// scale (n = 2043 at 1107/2043 prevalence; n = 395 at 140/395), with effect
// sizes calibrated so the clinical branch carries more signal than the ECG
// branch and fusion helps.
std::pair<GenConfig, GenConfig> default_scenario(std::uint64_t seed = 0);

// Same cohort shapes with every effect zeroed, for null-signal runs.
std::pair<GenConfig, GenConfig> null_scenario(std::uint64_t seed = 0);

nlohmann::json gen_config_to_json(const GenConfig& config);
GenConfig gen_config_from_json(const nlohmann::json& j);

}  // namespace dianet
