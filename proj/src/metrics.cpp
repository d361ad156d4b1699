#include "dianet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "dianet/csv.hpp"
#include "dianet/errors.hpp"

namespace dianet {

namespace {

void check_aligned(std::span<const double> probs, std::span<const int> labels) {
    if (probs.size() != labels.size()) {
        throw DimensionError("probs and labels must have the same length");
    }
    if (probs.empty()) throw DimensionError("empty prediction set");
}

std::pair<std::size_t, std::size_t> class_counts(std::span<const int> labels) {
    std::size_t pos = 0;
    for (int y : labels) pos += (y == 1);
    return {pos, labels.size() - pos};
}

// Indices sorted by descending prob; used by the threshold-sweep metrics.
std::vector<std::size_t> order_desc(std::span<const double> probs) {
    std::vector<std::size_t> idx(probs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&probs](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
    return idx;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double auroc(std::span<const double> probs, std::span<const int> labels) {
    check_aligned(probs, labels);
    const auto [m, n] = class_counts(labels);
    if (m == 0 || n == 0) throw UndefinedMetricError("auroc needs both classes");

    std::vector<std::size_t> idx(probs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&probs](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });

    // midrank sum over positives; half-integer ranks stay exact in double
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    const std::size_t total = idx.size();
    while (i < total) {
        std::size_t j = i;
        while (j + 1 < total && probs[idx[j + 1]] == probs[idx[i]]) ++j;
        const double avg_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[idx[k]] == 1) pos_rank_sum += avg_rank;
        }
        i = j + 1;
    }
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return (pos_rank_sum - md * (md + 1.0) / 2.0) / (md * nd);
}

double auprc(std::span<const double> probs, std::span<const int> labels) {
    check_aligned(probs, labels);
    const auto [m, n] = class_counts(labels);
    if (m == 0) throw UndefinedMetricError("auprc needs at least one positive");

    const auto idx = order_desc(probs);
    double ap = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && probs[idx[j + 1]] == probs[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[idx[k]] == 1) ++tp; else ++fp;
        }
        const double recall = static_cast<double>(tp) / static_cast<double>(m);
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j + 1;
    }
    return ap;
}

Confusion confusion_at_threshold(std::span<const double> probs, std::span<const int> labels,
                                 double t) {
    check_aligned(probs, labels);
    Confusion c;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const bool pred = probs[i] >= t;
        if (labels[i] == 1) {
            pred ? ++c.tp : ++c.fn;
        } else {
            pred ? ++c.fp : ++c.tn;
        }
    }
    c.sensitivity = ratio(c.tp, c.tp + c.fn);
    c.specificity = ratio(c.tn, c.tn + c.fp);
    c.ppv = ratio(c.tp, c.tp + c.fp);
    c.npv = ratio(c.tn, c.tn + c.fn);
    c.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    c.accuracy = ratio(c.tp + c.tn, probs.size());
    return c;
}

double youden_threshold(std::span<const double> probs, std::span<const int> labels) {
    check_aligned(probs, labels);
    const auto [m, n] = class_counts(labels);
    if (m == 0 || n == 0) throw UndefinedMetricError("youden_threshold needs both classes");

    // Descending sweep over unique values; at threshold v the positive set is
    // everything >= v. The +inf candidate (J = 0) seeds the scan; updating on
    // >= while descending leaves the smallest threshold among ties.
    double best_t = std::numeric_limits<double>::infinity();
    double best_j = 0.0;
    const auto idx = order_desc(probs);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && probs[idx[j + 1]] == probs[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[idx[k]] == 1) ++tp; else ++fp;
        }
        const double sens = static_cast<double>(tp) / static_cast<double>(m);
        const double spec = static_cast<double>(n - fp) / static_cast<double>(n);
        const double stat = sens + spec - 1.0;
        if (stat >= best_j) {
            best_j = stat;
            best_t = probs[idx[i]];
        }
        i = j + 1;
    }
    return best_t;
}

double brier(std::span<const double> probs, std::span<const int> labels) {
    check_aligned(probs, labels);
    double s = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double d = probs[i] - static_cast<double>(labels[i]);
        s += d * d;
    }
    return s / static_cast<double>(probs.size());
}

CalibrationCurve calibration_bins(std::span<const double> probs, std::span<const int> labels,
                                  std::size_t n_bins) {
    check_aligned(probs, labels);
    if (n_bins < 2) throw DimensionError("calibration_bins needs n_bins >= 2");

    std::vector<double> sum_pred(n_bins, 0.0);
    std::vector<std::size_t> count(n_bins, 0);
    std::vector<std::size_t> positives(n_bins, 0);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        double b = probs[i] * static_cast<double>(n_bins);
        std::size_t bin = std::min(static_cast<std::size_t>(std::max(b, 0.0)), n_bins - 1);
        sum_pred[bin] += probs[i];
        ++count[bin];
        positives[bin] += (labels[i] == 1);
    }

    CalibrationCurve curve;
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (count[b] == 0) continue;
        CalibrationBin bin;
        bin.mean_pred = sum_pred[b] / static_cast<double>(count[b]);
        bin.frac_pos = static_cast<double>(positives[b]) / static_cast<double>(count[b]);
        bin.count = count[b];
        curve.bins.push_back(bin);
    }
    curve.brier = brier(probs, labels);
    return curve;
}

RocCurve roc_curve(std::span<const double> probs, std::span<const int> labels) {
    check_aligned(probs, labels);
    const auto [m, n] = class_counts(labels);
    if (m == 0 || n == 0) throw UndefinedMetricError("roc_curve needs both classes");

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    const auto idx = order_desc(probs);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && probs[idx[j + 1]] == probs[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[idx[k]] == 1) ++tp; else ++fp;
        }
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n),
                                static_cast<double>(tp) / static_cast<double>(m),
                                probs[idx[i]]});
        i = j + 1;
    }
    curve.auroc = auroc(probs, labels);
    return curve;
}

PrCurve pr_curve(std::span<const double> probs, std::span<const int> labels) {
    check_aligned(probs, labels);
    const auto [m, n] = class_counts(labels);
    if (m == 0) throw UndefinedMetricError("pr_curve needs at least one positive");

    PrCurve curve;
    const auto idx = order_desc(probs);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && probs[idx[j + 1]] == probs[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[idx[k]] == 1) ++tp; else ++fp;
        }
        curve.points.push_back({static_cast<double>(tp) / static_cast<double>(m),
                                static_cast<double>(tp) / static_cast<double>(tp + fp),
                                probs[idx[i]]});
        i = j + 1;
    }
    curve.auprc = auprc(probs, labels);
    return curve;
}

void write_roc_csv(const std::string& path, const RocCurve& curve) {
    CsvTable table;
    table.header = {"fpr", "tpr", "threshold"};
    for (const auto& p : curve.points) {
        table.rows.push_back({format_double(p.fpr), format_double(p.tpr),
                              std::isinf(p.threshold) ? "inf" : format_double(p.threshold)});
    }
    write_csv(path, table);
}

void write_pr_csv(const std::string& path, const PrCurve& curve) {
    CsvTable table;
    table.header = {"recall", "precision", "threshold"};
    for (const auto& p : curve.points) {
        table.rows.push_back(
            {format_double(p.recall), format_double(p.precision), format_double(p.threshold)});
    }
    write_csv(path, table);
}

void write_calibration_csv(const std::string& path, const CalibrationCurve& curve) {
    CsvTable table;
    table.header = {"mean_pred", "frac_pos", "count"};
    for (const auto& b : curve.bins) {
        table.rows.push_back(
            {format_double(b.mean_pred), format_double(b.frac_pos), std::to_string(b.count)});
    }
    write_csv(path, table);
}

}  // namespace dianet
