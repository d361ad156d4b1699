#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dianet {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // (0,0) first, (1,1) last, monotone
    double auroc = 0.0;
};

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
    double threshold = 0.0;
};

struct PrCurve {
    std::vector<PrPoint> points;
    double auprc = 0.0;
};

struct CalibrationBin {
    double mean_pred = 0.0;
    double frac_pos = 0.0;
    std::size_t count = 0;
};

struct CalibrationCurve {
    std::vector<CalibrationBin> bins;  // empty bins omitted
    double brier = 0.0;
};

// TP/FP/TN/FN counts at a threshold plus the derived ratios. A ratio whose
// denominator is zero is reported as nullopt, distinct from 0.
struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> ppv;
    std::optional<double> npv;
    std::optional<double> f1;
    std::optional<double> accuracy;
};

// Mann-Whitney AUROC (ties credited 0.5), computed by midranks in
// O(n log n). Matches the all-pairs counting oracle exactly.
// Throws UndefinedMetricError if only one class is present.
double auroc(std::span<const double> probs, std::span<const int> labels);

// Average precision: sum of (R_i - R_{i-1}) * P_i over descending unique
// thresholds. Throws UndefinedMetricError if there are no positives.
double auprc(std::span<const double> probs, std::span<const int> labels);

// Predicted positive iff prob >= t.
Confusion confusion_at_threshold(std::span<const double> probs, std::span<const int> labels,
                                 double t);

// Threshold among the unique probs (plus +inf) maximizing J = sens + spec - 1,
// ties broken toward the smallest threshold.
double youden_threshold(std::span<const double> probs, std::span<const int> labels);

double brier(std::span<const double> probs, std::span<const int> labels);

// Equal-width bins over [0,1], right-open except the last bin.
CalibrationCurve calibration_bins(std::span<const double> probs, std::span<const int> labels,
                                  std::size_t n_bins = 10);

RocCurve roc_curve(std::span<const double> probs, std::span<const int> labels);

PrCurve pr_curve(std::span<const double> probs, std::span<const int> labels);

// Curve CSV writers, one point per row with a header.
void write_roc_csv(const std::string& path, const RocCurve& curve);
void write_pr_csv(const std::string& path, const PrCurve& curve);
void write_calibration_csv(const std::string& path, const CalibrationCurve& curve);

}  // namespace dianet
