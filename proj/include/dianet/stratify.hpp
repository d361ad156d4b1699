#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dianet {

enum class RiskGroup { Low, Medium, High };

std::string risk_group_name(RiskGroup g);

struct RiskGroupStats {
    std::size_t count = 0;
    std::size_t positives = 0;
    std::optional<double> ppv;  // unset for an empty group
};

struct RiskGroups {
    double t_low = 0.0;   // 20th-percentile threshold
    double t_high = 0.0;  // 80th-percentile threshold
    std::vector<RiskGroup> assignment;
};

// Thresholds are the linear-interpolation quantiles of the scores at the
// given levels. Low: score < t_low; High: score >= t_high; Medium otherwise.
// With all-equal scores both thresholds coincide and every row lands in High.
RiskGroups assign_risk_groups(std::span<const double> scores, double low_quantile = 0.2,
                              double high_quantile = 0.8);

// Per-group count, positives and positive predictive value.
std::vector<std::pair<RiskGroup, RiskGroupStats>> group_ppv(const RiskGroups& groups,
                                                            std::span<const int> labels);

}  // namespace dianet
