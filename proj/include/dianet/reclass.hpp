#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace dianet {

struct BootstrapSpec;  // experiment.hpp

struct DeLongResult {
    double theta_a = 0.0;
    double theta_b = 0.0;
    double z = 0.0;
    double p = 1.0;
};

// Paired-model comparison statistics for a (baseline, candidate) pair.
struct ComparisonReport {
    std::string base_name;
    std::string new_name;
    double auroc_base = 0.0;
    double auroc_new = 0.0;
    double delong_z = 0.0;
    double delong_p = 1.0;
    double nri = 0.0;
    double nri_p = 1.0;
    double cnri = 0.0;
    double cnri_p = 1.0;
    double idi = 0.0;
    double idi_p = 1.0;
    std::vector<double> nri_cutpoints;
};

// DeLong test for two correlated AUROCs. theta values are computed with the
// metrics module's auroc, so they match it exactly; the variance of
// theta_a - theta_b comes from the structural components
//   V10(i) = mean_j psi(x_i, y_j),  V01(j) = mean_i psi(x_i, y_j),
// psi in {0, 0.5, 1}, with sample covariances over positives and negatives.
DeLongResult delong_test(std::span<const double> probs_a, std::span<const double> probs_b,
                         std::span<const int> labels);

struct NriComponents {
    std::size_t events_up = 0;
    std::size_t events_down = 0;
    std::size_t nonevents_up = 0;
    std::size_t nonevents_down = 0;
    double nri = 0.0;
};

// Categorical NRI over intervals [0,c1), [c1,c2), ..., [ck,1] defined by the
// strictly ascending cutpoints.
NriComponents nri_categorical(std::span<const double> probs_old,
                              std::span<const double> probs_new, std::span<const int> labels,
                              std::span<const double> cutpoints);

// Category-free NRI: any strict probability increase counts as up.
double nri_continuous(std::span<const double> probs_old, std::span<const double> probs_new,
                      std::span<const int> labels);

double idi(std::span<const double> probs_old, std::span<const double> probs_new,
           std::span<const int> labels);

enum class ReclassStatistic { Nri, Cnri, Idi };

// Two-sided bootstrap-normal p-value: resample pairs, z = point / bootstrap
// SD around 0. For the categorical statistic the cutpoints are fixed.
double reclass_p_value(ReclassStatistic statistic, std::span<const double> probs_old,
                       std::span<const double> probs_new, std::span<const int> labels,
                       const BootstrapSpec& spec,
                       std::span<const double> cutpoints = {});

// Full fused-vs-baseline style comparison; NRI cutpoints default to the 20%
// and 80% linear-interpolation quantiles of the baseline scores.
ComparisonReport compare_models(const std::string& base_name, std::span<const double> probs_base,
                                const std::string& new_name, std::span<const double> probs_new,
                                std::span<const int> labels, const BootstrapSpec& spec);

nlohmann::json comparison_to_json(const ComparisonReport& report);

}  // namespace dianet
