#include "dianet/stratify.hpp"

#include <algorithm>

#include "dianet/errors.hpp"
#include "dianet/stats.hpp"

namespace dianet {

std::string risk_group_name(RiskGroup g) {
    switch (g) {
        case RiskGroup::Low: return "Low";
        case RiskGroup::Medium: return "Medium";
        case RiskGroup::High: return "High";
    }
    return "?";
}

RiskGroups assign_risk_groups(std::span<const double> scores, double low_quantile,
                              double high_quantile) {
    if (scores.size() < 5) {
        throw StratificationError("risk stratification needs at least 5 scores");
    }
    if (!(low_quantile < high_quantile)) {
        throw StratificationError("quantile levels must be ascending");
    }
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());

    RiskGroups groups;
    groups.t_low = quantile_sorted(sorted, low_quantile);
    groups.t_high = quantile_sorted(sorted, high_quantile);
    groups.assignment.reserve(scores.size());
    for (double s : scores) {
        if (s >= groups.t_high) {
            groups.assignment.push_back(RiskGroup::High);
        } else if (s < groups.t_low) {
            groups.assignment.push_back(RiskGroup::Low);
        } else {
            groups.assignment.push_back(RiskGroup::Medium);
        }
    }
    return groups;
}

std::vector<std::pair<RiskGroup, RiskGroupStats>> group_ppv(const RiskGroups& groups,
                                                            std::span<const int> labels) {
    if (labels.size() != groups.assignment.size()) {
        throw DimensionError("group_ppv: labels not aligned with assignment");
    }
    std::vector<std::pair<RiskGroup, RiskGroupStats>> out = {
        {RiskGroup::Low, {}}, {RiskGroup::Medium, {}}, {RiskGroup::High, {}}};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto& stats = out[static_cast<std::size_t>(groups.assignment[i])].second;
        ++stats.count;
        stats.positives += (labels[i] == 1);
    }
    for (auto& [group, stats] : out) {
        if (stats.count > 0) {
            stats.ppv = static_cast<double>(stats.positives) / static_cast<double>(stats.count);
        }
    }
    return out;
}

}  // namespace dianet
