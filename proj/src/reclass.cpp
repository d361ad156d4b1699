#include "dianet/reclass.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "dianet/errors.hpp"
#include "dianet/experiment.hpp"
#include "dianet/metrics.hpp"
#include "dianet/rng.hpp"
#include "dianet/stats.hpp"

namespace dianet {

namespace {

double psi(double x, double y) {
    if (x > y) return 1.0;
    if (x == y) return 0.5;
    return 0.0;
}

void check_pair(std::span<const double> a, std::span<const double> b,
                std::span<const int> labels) {
    if (a.size() != b.size() || a.size() != labels.size()) {
        throw DimensionError("paired comparison needs aligned vectors");
    }
    if (a.empty()) throw DimensionError("empty prediction vectors");
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_classes(
    std::span<const int> labels) {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == 1 ? pos : neg).push_back(i);
    }
    return {pos, neg};
}

}  // namespace

DeLongResult delong_test(std::span<const double> probs_a, std::span<const double> probs_b,
                         std::span<const int> labels) {
    check_pair(probs_a, probs_b, labels);
    const auto [pos, neg] = split_classes(labels);
    const std::size_t m = pos.size();
    const std::size_t n = neg.size();
    if (m == 0 || n == 0) throw UndefinedMetricError("delong_test needs both classes");

    auto components = [&](std::span<const double> p) {
        std::vector<double> v10(m, 0.0);
        std::vector<double> v01(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double score = psi(p[pos[i]], p[neg[j]]);
                v10[i] += score;
                v01[j] += score;
            }
        }
        for (double& v : v10) v /= static_cast<double>(n);
        for (double& v : v01) v /= static_cast<double>(m);
        return std::make_pair(v10, v01);
    };
    const auto [v10_a, v01_a] = components(probs_a);
    const auto [v10_b, v01_b] = components(probs_b);

    DeLongResult result;
    result.theta_a = auroc(probs_a, labels);
    result.theta_b = auroc(probs_b, labels);

    // zero degrees of freedom contribute no variance
    const double s10 = m >= 2 ? sample_cov(v10_a, v10_a) + sample_cov(v10_b, v10_b) -
                                    2.0 * sample_cov(v10_a, v10_b)
                              : 0.0;
    const double s01 = n >= 2 ? sample_cov(v01_a, v01_a) + sample_cov(v01_b, v01_b) -
                                    2.0 * sample_cov(v01_a, v01_b)
                              : 0.0;
    const double var = s10 / static_cast<double>(m) + s01 / static_cast<double>(n);

    if (var <= 1e-15) {
        if (result.theta_a == result.theta_b) {
            result.z = 0.0;
            result.p = 1.0;
            return result;
        }
        throw DegenerateVarianceError("delong_test: zero variance with unequal AUROCs");
    }
    result.z = (result.theta_a - result.theta_b) / std::sqrt(var);
    result.p = two_sided_p(result.z);
    return result;
}

namespace {

std::size_t category_of(double prob, std::span<const double> cutpoints) {
    // intervals right-open, last interval closed at 1
    std::size_t cat = 0;
    for (double c : cutpoints) {
        if (prob >= c) ++cat; else break;
    }
    return cat;
}

}  // namespace

NriComponents nri_categorical(std::span<const double> probs_old,
                              std::span<const double> probs_new, std::span<const int> labels,
                              std::span<const double> cutpoints) {
    check_pair(probs_old, probs_new, labels);
    if (cutpoints.empty()) throw UndefinedMetricError("nri_categorical needs cutpoints");
    for (std::size_t i = 0; i < cutpoints.size(); ++i) {
        if (cutpoints[i] <= 0.0 || cutpoints[i] >= 1.0) {
            throw UndefinedMetricError("nri cutpoints must lie in (0,1)");
        }
        if (i > 0 && cutpoints[i] <= cutpoints[i - 1]) {
            throw UndefinedMetricError("nri cutpoints must be strictly ascending");
        }
    }
    const auto [pos, neg] = split_classes(labels);
    if (pos.empty() || neg.empty()) {
        throw UndefinedMetricError("nri needs events and nonevents");
    }

    NriComponents out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t c_old = category_of(probs_old[i], cutpoints);
        const std::size_t c_new = category_of(probs_new[i], cutpoints);
        if (c_new == c_old) continue;
        const bool up = c_new > c_old;
        if (labels[i] == 1) {
            up ? ++out.events_up : ++out.events_down;
        } else {
            up ? ++out.nonevents_up : ++out.nonevents_down;
        }
    }
    const double m = static_cast<double>(pos.size());
    const double n = static_cast<double>(neg.size());
    out.nri = (static_cast<double>(out.events_up) - static_cast<double>(out.events_down)) / m +
              (static_cast<double>(out.nonevents_down) - static_cast<double>(out.nonevents_up)) / n;
    return out;
}

double nri_continuous(std::span<const double> probs_old, std::span<const double> probs_new,
                      std::span<const int> labels) {
    check_pair(probs_old, probs_new, labels);
    const auto [pos, neg] = split_classes(labels);
    if (pos.empty() || neg.empty()) {
        throw UndefinedMetricError("cnri needs events and nonevents");
    }
    std::size_t events_up = 0, events_down = 0, nonevents_up = 0, nonevents_down = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (probs_new[i] == probs_old[i]) continue;  // ties count neither
        const bool up = probs_new[i] > probs_old[i];
        if (labels[i] == 1) {
            up ? ++events_up : ++events_down;
        } else {
            up ? ++nonevents_up : ++nonevents_down;
        }
    }
    return (static_cast<double>(events_up) - static_cast<double>(events_down)) /
               static_cast<double>(pos.size()) +
           (static_cast<double>(nonevents_down) - static_cast<double>(nonevents_up)) /
               static_cast<double>(neg.size());
}

double idi(std::span<const double> probs_old, std::span<const double> probs_new,
           std::span<const int> labels) {
    check_pair(probs_old, probs_new, labels);
    const auto [pos, neg] = split_classes(labels);
    if (pos.empty() || neg.empty()) {
        throw UndefinedMetricError("idi needs events and nonevents");
    }
    auto class_mean = [](std::span<const double> p, const std::vector<std::size_t>& idx) {
        double s = 0.0;
        for (std::size_t i : idx) s += p[i];
        return s / static_cast<double>(idx.size());
    };
    const double event_gain = class_mean(probs_new, pos) - class_mean(probs_old, pos);
    const double nonevent_gain = class_mean(probs_new, neg) - class_mean(probs_old, neg);
    return event_gain - nonevent_gain;
}

double reclass_p_value(ReclassStatistic statistic, std::span<const double> probs_old,
                       std::span<const double> probs_new, std::span<const int> labels,
                       const BootstrapSpec& spec, std::span<const double> cutpoints) {
    check_pair(probs_old, probs_new, labels);
    spec.validate();

    auto eval = [&](std::span<const double> po, std::span<const double> pn,
                    std::span<const int> ls) {
        switch (statistic) {
            case ReclassStatistic::Nri:
                return nri_categorical(po, pn, ls, cutpoints).nri;
            case ReclassStatistic::Cnri:
                return nri_continuous(po, pn, ls);
            case ReclassStatistic::Idi:
                return idi(po, pn, ls);
        }
        throw ConfigError("unknown reclass statistic");
    };

    const double point = eval(probs_old, probs_new, labels);

    const std::size_t n = labels.size();
    std::vector<double> values(static_cast<std::size_t>(spec.n_resamples));
    std::vector<double> po(n), pn(n);
    std::vector<int> ls(n);
    for (int r = 0; r < spec.n_resamples; ++r) {
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(r)));
        bool done = false;
        for (int attempt = 0; attempt <= 100 && !done; ++attempt) {
            bool has_pos = false;
            bool has_neg = false;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = rng.next_index(n);
                po[i] = probs_old[j];
                pn[i] = probs_new[j];
                ls[i] = labels[j];
                has_pos |= ls[i] == 1;
                has_neg |= ls[i] == 0;
            }
            if (!has_pos || !has_neg) continue;
            try {
                values[static_cast<std::size_t>(r)] = eval(po, pn, ls);
                done = true;
            } catch (const UndefinedMetricError&) {
            }
        }
        if (!done) {
            throw BootstrapError("reclass_p_value: statistic undefined on all resamples");
        }
    }

    const double sd = sample_sd(values);
    if (sd == 0.0) {
        if (point == 0.0) return 1.0;
        throw DegenerateVarianceError("reclass_p_value: zero bootstrap SD with nonzero point");
    }
    return two_sided_p(point / sd);
}

ComparisonReport compare_models(const std::string& base_name, std::span<const double> probs_base,
                                const std::string& new_name, std::span<const double> probs_new,
                                std::span<const int> labels, const BootstrapSpec& spec) {
    ComparisonReport report;
    report.base_name = base_name;
    report.new_name = new_name;

    const DeLongResult dl = delong_test(probs_new, probs_base, labels);
    report.auroc_new = dl.theta_a;
    report.auroc_base = dl.theta_b;
    report.delong_z = dl.z;
    report.delong_p = dl.p;

    // categorical cutpoints: the stratification quantiles of the baseline scores
    std::vector<double> base_sorted(probs_base.begin(), probs_base.end());
    std::sort(base_sorted.begin(), base_sorted.end());
    report.nri_cutpoints = {quantile_sorted(base_sorted, 0.2), quantile_sorted(base_sorted, 0.8)};

    report.nri = nri_categorical(probs_base, probs_new, labels, report.nri_cutpoints).nri;
    report.cnri = nri_continuous(probs_base, probs_new, labels);
    report.idi = idi(probs_base, probs_new, labels);

    BootstrapSpec sub = spec;
    sub.seed = derive_seed(spec.seed, 1);
    report.nri_p = reclass_p_value(ReclassStatistic::Nri, probs_base, probs_new, labels, sub,
                                   report.nri_cutpoints);
    sub.seed = derive_seed(spec.seed, 2);
    report.cnri_p = reclass_p_value(ReclassStatistic::Cnri, probs_base, probs_new, labels, sub);
    sub.seed = derive_seed(spec.seed, 3);
    report.idi_p = reclass_p_value(ReclassStatistic::Idi, probs_base, probs_new, labels, sub);
    return report;
}

nlohmann::json comparison_to_json(const ComparisonReport& report) {
    return nlohmann::json{
        {"base_model", report.base_name}, {"new_model", report.new_name},
        {"auroc_base", report.auroc_base}, {"auroc_new", report.auroc_new},
        {"delong_z", report.delong_z},     {"delong_p", report.delong_p},
        {"nri", report.nri},               {"nri_p", report.nri_p},
        {"cnri", report.cnri},             {"cnri_p", report.cnri_p},
        {"idi", report.idi},               {"idi_p", report.idi_p},
        {"nri_cutpoints", report.nri_cutpoints}};
}

}  // namespace dianet
