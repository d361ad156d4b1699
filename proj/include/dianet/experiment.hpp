#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dianet/cohort.hpp"
#include "dianet/metrics.hpp"
#include "dianet/net.hpp"
#include "dianet/preprocess.hpp"
#include "dianet/reclass.hpp"

namespace dianet {

// ---------------------------------------------------------------------------
// Folds

struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;  // per-row fold index in [0, k)
    // set when some class has fewer members than k, so folds may lack it
    bool class_warning = false;
};

// Stratified assignment: indices are shuffled within each class (label 1
// first, then 0) and dealt round-robin, continuing a single rolling fold
// cursor across classes so fold sizes stay within 1 of each other.
FoldPlan make_folds(std::span<const int> labels, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Bootstrap

struct PredictionSet {
    std::string model_name;
    std::vector<double> probs;
    std::vector<int> labels;
    std::vector<std::string> ids;  // optional, used for CSV exports
};

struct BootstrapSpec {
    int n_resamples = 1000;
    std::uint64_t seed = 0;
    double ci_level = 0.95;

    void validate() const;
};

struct BootstrapSummary {
    double point = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

using MetricFn = std::function<double(std::span<const double>, std::span<const int>)>;

// Resample r draws its indices from Rng(derive_seed(spec.seed, r)).
// A draw is kept once it contains both classes and the metric evaluates;
// otherwise it is redrawn (at most 100 retries), so exactly n_resamples
// values enter the mean/SD/percentile-CI summary.
BootstrapSummary bootstrap_metric(const PredictionSet& predset, const MetricFn& metric,
                                  const BootstrapSpec& spec);

// The Table-2/3 metric roster. Threshold metrics (sensitivity, specificity,
// ppv, npv, f1, accuracy) are evaluated at the Youden threshold recomputed on
// each resample.
std::vector<std::string> standard_metric_names();

// Named single metric on raw vectors; throws UndefinedMetricError when the
// metric is not defined on the input.
double eval_named_metric(const std::string& name, std::span<const double> probs,
                         std::span<const int> labels);

// A metric whose point estimate is undefined on the prediction set (for
// example npv when the Youden threshold predicts everything positive) is
// reported as an unset summary instead of failing the run.
using MetricSummaries = std::vector<std::pair<std::string, std::optional<BootstrapSummary>>>;

// Bootstraps several named metrics over the shared resample streams; the
// result for each metric is identical to calling bootstrap_metric with that
// metric alone.
MetricSummaries bootstrap_named_metrics(const PredictionSet& predset,
                                        std::span<const std::string> names,
                                        const BootstrapSpec& spec);

// ---------------------------------------------------------------------------
// Model configurations

enum class ModelKind { CrfOnly, EcgOnly, Fused };

std::string model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);
std::vector<ModelKind> all_models();

struct ExperimentOptions {
    int k = 5;
    TrainConfig train;
    BootstrapSpec bootstrap;
    std::uint64_t seed = 0;
    std::vector<ModelKind> models = all_models();
    int hidden_width = 32;
    bool tune = false;  // small grid over hidden width {16,32} x dropout {0.1,0.2}
};

ArchSpec arch_for_model(ModelKind kind, const FeatureSchema& schema, int hidden_width,
                        double dropout_rate);

// ---------------------------------------------------------------------------
// Cross-validation and longitudinal evaluation

struct FoldEval {
    int fold = 0;
    PredictionSet preds;
    MetricSummaries metrics;
    double youden = 0.0;
};

struct ModelCvResult {
    ModelKind model = ModelKind::CrfOnly;
    int hidden_width = 32;
    double dropout_rate = 0.2;
    std::vector<FoldEval> folds;
    // per-metric cross-fold average of (point, mean, sd, ci bounds)
    MetricSummaries average;
};

struct CvResult {
    FoldPlan plan;
    std::vector<ModelCvResult> models;
};

// Per fold: preprocessor fitted on the training split only, one model per
// configuration trained on it, predictions on the held-out fold, metrics
// bootstrapped per the spec.
CvResult run_crossval(const Cohort& cohort, const ExperimentOptions& options);

struct ModelTestEval {
    ModelKind model = ModelKind::CrfOnly;
    int hidden_width = 32;
    double dropout_rate = 0.2;
    PredictionSet preds;
    MetricSummaries metrics;
    double youden = 0.0;
    RocCurve roc;
    PrCurve pr;
    CalibrationCurve calibration;
    ModelParams params;
};

struct LongitudinalResult {
    std::vector<ModelTestEval> models;
    std::optional<ComparisonReport> comparison;
    PreprocessorState crf_state;
    PreprocessorState ecg_state;
};

// Fits on the full development cohort, evaluates on the test cohort and runs
// the paired comparison (default fused vs crf_only). Overlapping row ids
// between the cohorts raise LeakageError.
LongitudinalResult run_longitudinal(const Cohort& dev, const Cohort& test,
                                    const ExperimentOptions& options,
                                    ModelKind compare_base = ModelKind::CrfOnly,
                                    ModelKind compare_new = ModelKind::Fused);

// Grid search by mean validation AUROC over hidden width {16,32} and dropout
// {0.1,0.2}; ties keep the earlier candidate in that order.
std::pair<int, double> tune_hyperparams(const Cohort& cohort, ModelKind model,
                                        const ExperimentOptions& options);

nlohmann::json cv_result_to_json(const CvResult& result);
nlohmann::json longitudinal_result_to_json(const LongitudinalResult& result);

}  // namespace dianet
