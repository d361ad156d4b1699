#include "dianet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "dianet/errors.hpp"
#include "dianet/parallel.hpp"
#include "dianet/rng.hpp"
#include "dianet/stats.hpp"

namespace dianet {

// Seed stream layout under a root seed S (derive_seed(S, index)):
//   1                     fold plan
//   3, 4                  synthetic dev/test generator (synthgen)
//   10 + 2*model          longitudinal training per model
//   11 + 2*model          longitudinal bootstrap per model
//   50                    comparison bootstrap
//   60                    hyperparameter-tuning fold plan
//   100 + 2*(fold*3+model)     CV training per fold/model
//   101 + 2*(fold*3+model)     CV bootstrap per fold/model
// Bootstrap resample r then uses derive_seed(stream_seed, r).

FoldPlan make_folds(std::span<const int> labels, int k, std::uint64_t seed) {
    const std::size_t n = labels.size();
    if (k < 2) throw ConfigError("make_folds needs k >= 2");
    if (n < static_cast<std::size_t>(k)) throw ConfigError("make_folds needs n >= k");

    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < n; ++i) {
        (labels[i] == 1 ? positives : negatives).push_back(i);
    }
    if (positives.empty() || negatives.empty()) {
        throw ConfigError("make_folds needs both classes");
    }

    FoldPlan plan;
    plan.k = k;
    plan.assignments.assign(n, 0);
    plan.class_warning = positives.size() < static_cast<std::size_t>(k) ||
                         negatives.size() < static_cast<std::size_t>(k);

    Rng rng(seed);
    std::size_t cursor = 0;  // rolls across classes so fold sizes stay even
    for (auto* cls : {&positives, &negatives}) {
        rng.shuffle(*cls);
        for (std::size_t idx : *cls) {
            plan.assignments[idx] = static_cast<int>(cursor % static_cast<std::size_t>(k));
            ++cursor;
        }
    }
    return plan;
}

void BootstrapSpec::validate() const {
    if (n_resamples < 1) throw ConfigError("bootstrap needs n_resamples >= 1");
    if (ci_level <= 0.0 || ci_level >= 1.0) throw ConfigError("ci_level must lie in (0,1)");
}

// ---------------------------------------------------------------------------
// Metric registry

namespace {

enum class MetricId {
    Auroc,
    Auprc,
    Sensitivity,
    Specificity,
    Ppv,
    Npv,
    F1,
    Accuracy,
    Brier
};

const std::vector<std::pair<std::string, MetricId>>& metric_table() {
    static const std::vector<std::pair<std::string, MetricId>> table = {
        {"auroc", MetricId::Auroc},           {"auprc", MetricId::Auprc},
        {"sensitivity", MetricId::Sensitivity}, {"specificity", MetricId::Specificity},
        {"ppv", MetricId::Ppv},               {"npv", MetricId::Npv},
        {"f1", MetricId::F1},                 {"accuracy", MetricId::Accuracy},
        {"brier", MetricId::Brier},
    };
    return table;
}

MetricId metric_id(const std::string& name) {
    for (const auto& [n, id] : metric_table()) {
        if (n == name) return id;
    }
    throw ConfigError("unknown metric: " + name);
}

// Evaluates metrics on one sample, sharing the Youden threshold and confusion
// counts across the threshold family.
class SampleEval {
  public:
    SampleEval(std::span<const double> probs, std::span<const int> labels)
        : probs_(probs), labels_(labels) {}

    double eval(MetricId id) {
        switch (id) {
            case MetricId::Auroc: return auroc(probs_, labels_);
            case MetricId::Auprc: return auprc(probs_, labels_);
            case MetricId::Brier: return brier(probs_, labels_);
            case MetricId::Sensitivity: return field(confusion().sensitivity, "sensitivity");
            case MetricId::Specificity: return field(confusion().specificity, "specificity");
            case MetricId::Ppv: return field(confusion().ppv, "ppv");
            case MetricId::Npv: return field(confusion().npv, "npv");
            case MetricId::F1: return field(confusion().f1, "f1");
            case MetricId::Accuracy: return field(confusion().accuracy, "accuracy");
        }
        throw ConfigError("unknown metric id");
    }

    double youden() {
        confusion();
        return youden_;
    }

  private:
    const Confusion& confusion() {
        if (!conf_) {
            youden_ = youden_threshold(probs_, labels_);
            conf_ = confusion_at_threshold(probs_, labels_, youden_);
        }
        return *conf_;
    }

    static double field(const std::optional<double>& v, const char* name) {
        if (!v) throw UndefinedMetricError(std::string(name) + " undefined (zero denominator)");
        return *v;
    }

    std::span<const double> probs_;
    std::span<const int> labels_;
    double youden_ = 0.0;
    std::optional<Confusion> conf_;
};

BootstrapSummary summarize(double point, std::vector<double> values, double ci_level) {
    BootstrapSummary s;
    s.point = point;
    s.mean = mean(values);
    s.sd = sample_sd(values);
    std::sort(values.begin(), values.end());
    const double alpha = (1.0 - ci_level) / 2.0;
    s.ci_low = quantile_sorted(values, alpha);
    s.ci_high = quantile_sorted(values, 1.0 - alpha);
    return s;
}

// Core resampling loop shared by the single- and multi-metric entry points.
// For each resample slot, attempts are drawn until the draw has both classes
// and the metric evaluates; each metric walks the same attempt sequence.
std::vector<std::vector<double>> bootstrap_values(
    const PredictionSet& predset, const std::vector<MetricId>& ids, const BootstrapSpec& spec) {
    spec.validate();
    const std::size_t n = predset.probs.size();
    if (n == 0 || predset.labels.size() != n) {
        throw DimensionError("bootstrap: predictions and labels must align");
    }

    const std::size_t n_metrics = ids.size();
    std::vector<std::vector<double>> values(n_metrics,
                                            std::vector<double>(spec.n_resamples, 0.0));

    std::vector<std::string> failure(static_cast<std::size_t>(spec.n_resamples));
    parallel_for(static_cast<std::size_t>(spec.n_resamples), [&](std::size_t r) {
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(r)));
        std::vector<double> probs(n);
        std::vector<int> labels(n);
        std::vector<bool> pending(n_metrics, true);
        std::size_t remaining = n_metrics;
        for (int attempt = 0; attempt <= 100 && remaining > 0; ++attempt) {
            bool has_pos = false;
            bool has_neg = false;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = rng.next_index(n);
                probs[i] = predset.probs[j];
                labels[i] = predset.labels[j];
                has_pos |= labels[i] == 1;
                has_neg |= labels[i] == 0;
            }
            if (!has_pos || !has_neg) continue;
            SampleEval eval(probs, labels);
            for (std::size_t m = 0; m < n_metrics; ++m) {
                if (!pending[m]) continue;
                try {
                    values[m][r] = eval.eval(ids[m]);
                    pending[m] = false;
                    --remaining;
                } catch (const UndefinedMetricError&) {
                }
            }
        }
        if (remaining > 0) {
            for (std::size_t m = 0; m < n_metrics && failure[r].empty(); ++m) {
                if (!pending[m]) continue;
                for (const auto& [nm, id] : metric_table()) {
                    if (id == ids[m]) {
                        failure[r] = "bootstrap: metric '" + nm + "' undefined on all resamples";
                    }
                }
            }
        }
    });
    for (const auto& f : failure) {
        if (!f.empty()) throw BootstrapError(f);
    }
    return values;
}

}  // namespace

std::vector<std::string> standard_metric_names() {
    return {"auroc", "auprc", "sensitivity", "specificity", "ppv", "npv", "f1", "brier"};
}

double eval_named_metric(const std::string& name, std::span<const double> probs,
                         std::span<const int> labels) {
    SampleEval eval(probs, labels);
    return eval.eval(metric_id(name));
}

BootstrapSummary bootstrap_metric(const PredictionSet& predset, const MetricFn& metric,
                                  const BootstrapSpec& spec) {
    spec.validate();
    const std::size_t n = predset.probs.size();
    if (n == 0 || predset.labels.size() != n) {
        throw DimensionError("bootstrap: predictions and labels must align");
    }
    const double point = metric(predset.probs, predset.labels);

    std::vector<double> values(static_cast<std::size_t>(spec.n_resamples), 0.0);
    std::vector<bool> failed(static_cast<std::size_t>(spec.n_resamples), false);
    parallel_for(static_cast<std::size_t>(spec.n_resamples), [&](std::size_t r) {
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(r)));
        std::vector<double> probs(n);
        std::vector<int> labels(n);
        bool done = false;
        for (int attempt = 0; attempt <= 100 && !done; ++attempt) {
            bool has_pos = false;
            bool has_neg = false;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = rng.next_index(n);
                probs[i] = predset.probs[j];
                labels[i] = predset.labels[j];
                has_pos |= labels[i] == 1;
                has_neg |= labels[i] == 0;
            }
            if (!has_pos || !has_neg) continue;
            try {
                values[r] = metric(probs, labels);
                done = true;
            } catch (const UndefinedMetricError&) {
            }
        }
        failed[r] = !done;
    });
    for (bool f : failed) {
        if (f) throw BootstrapError("bootstrap: metric undefined on all resamples");
    }
    return summarize(point, std::move(values), spec.ci_level);
}

MetricSummaries bootstrap_named_metrics(const PredictionSet& predset,
                                        std::span<const std::string> names,
                                        const BootstrapSpec& spec) {
    SampleEval point_eval(predset.probs, predset.labels);
    std::vector<MetricId> defined_ids;
    std::vector<std::size_t> defined_pos;
    std::vector<std::optional<double>> points(names.size());
    for (std::size_t m = 0; m < names.size(); ++m) {
        const MetricId id = metric_id(names[m]);
        try {
            points[m] = point_eval.eval(id);
            defined_ids.push_back(id);
            defined_pos.push_back(m);
        } catch (const UndefinedMetricError&) {
        }
    }

    auto values = bootstrap_values(predset, defined_ids, spec);

    MetricSummaries out(names.size());
    for (std::size_t m = 0; m < names.size(); ++m) out[m].first = names[m];
    for (std::size_t d = 0; d < defined_ids.size(); ++d) {
        const std::size_t m = defined_pos[d];
        out[m].second = summarize(*points[m], std::move(values[d]), spec.ci_level);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model configurations

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::CrfOnly: return "crf_only";
        case ModelKind::EcgOnly: return "ecg_only";
        case ModelKind::Fused: return "fused";
    }
    return "?";
}

ModelKind model_from_name(const std::string& name) {
    if (name == "crf_only") return ModelKind::CrfOnly;
    if (name == "ecg_only") return ModelKind::EcgOnly;
    if (name == "fused") return ModelKind::Fused;
    throw ConfigError("unknown model: " + name + " (expected crf_only, ecg_only or fused)");
}

std::vector<ModelKind> all_models() {
    return {ModelKind::CrfOnly, ModelKind::EcgOnly, ModelKind::Fused};
}

ArchSpec arch_for_model(ModelKind kind, const FeatureSchema& schema, int hidden_width,
                        double dropout_rate) {
    const int crf_dim = static_cast<int>(schema.crf_features.size());
    const int ecg_dim = static_cast<int>(schema.ecg_features.size());
    switch (kind) {
        case ModelKind::CrfOnly: return arch_unimodal(crf_dim, dropout_rate, hidden_width);
        case ModelKind::EcgOnly: return arch_unimodal(ecg_dim, dropout_rate, hidden_width);
        case ModelKind::Fused: return arch_fused(crf_dim, ecg_dim, dropout_rate, hidden_width);
    }
    throw ConfigError("unknown model kind");
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

// rows of a MaybeMatrix selected by index
MaybeMatrix take_rows(const MaybeMatrix& m, const std::vector<std::size_t>& idx) {
    MaybeMatrix out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(m[i]);
    return out;
}

struct PreparedInputs {
    Matrix crf;
    Matrix ecg;
};

std::vector<Matrix> branch_inputs(ModelKind kind, const PreparedInputs& prepared) {
    switch (kind) {
        case ModelKind::CrfOnly: return {prepared.crf};
        case ModelKind::EcgOnly: return {prepared.ecg};
        case ModelKind::Fused: return {prepared.crf, prepared.ecg};
    }
    throw ConfigError("unknown model kind");
}

int model_index(ModelKind kind) {
    return static_cast<int>(kind);
}

}  // namespace

std::pair<int, double> tune_hyperparams(const Cohort& cohort, ModelKind model,
                                        const ExperimentOptions& options) {
    const Modalities mods = split_modalities(cohort);
    const FoldPlan plan =
        make_folds(mods.labels, options.k, derive_seed(options.seed, 60));

    const std::vector<int> widths = {16, 32};
    const std::vector<double> dropouts = {0.1, 0.2};

    int best_width = widths.front();
    double best_dropout = dropouts.front();
    double best_score = -1.0;
    for (int width : widths) {
        for (double dropout : dropouts) {
            double auc_sum = 0.0;
            for (int fold = 0; fold < options.k; ++fold) {
                std::vector<std::size_t> train_idx;
                std::vector<std::size_t> test_idx;
                for (std::size_t i = 0; i < mods.labels.size(); ++i) {
                    (plan.assignments[i] == fold ? test_idx : train_idx).push_back(i);
                }
                const auto crf_state =
                    fit_preprocessor(take_rows(mods.crf, train_idx), cohort.schema.crf_kinds());
                const auto ecg_state =
                    fit_preprocessor(take_rows(mods.ecg, train_idx), cohort.schema.ecg_kinds());
                PreparedInputs train_in{
                    apply_preprocessor(crf_state, take_rows(mods.crf, train_idx)),
                    apply_preprocessor(ecg_state, take_rows(mods.ecg, train_idx))};
                PreparedInputs test_in{
                    apply_preprocessor(crf_state, take_rows(mods.crf, test_idx)),
                    apply_preprocessor(ecg_state, take_rows(mods.ecg, test_idx))};
                std::vector<int> train_labels;
                std::vector<int> test_labels;
                for (std::size_t i : train_idx) train_labels.push_back(mods.labels[i]);
                for (std::size_t i : test_idx) test_labels.push_back(mods.labels[i]);

                TrainConfig config = options.train;
                config.dropout_rate = dropout;
                config.seed = derive_seed(options.seed,
                                          100 + 2 * (static_cast<std::uint64_t>(fold) * 3 +
                                                     static_cast<std::uint64_t>(model_index(model))));
                const ArchSpec arch = arch_for_model(model, cohort.schema, width, dropout);
                const ModelParams params =
                    train(branch_inputs(model, train_in), train_labels, arch, config);
                const auto probs = predict(params, branch_inputs(model, test_in));
                auc_sum += auroc(probs, test_labels);
            }
            const double score = auc_sum / static_cast<double>(options.k);
            if (score > best_score) {
                best_score = score;
                best_width = width;
                best_dropout = dropout;
            }
        }
    }
    return {best_width, best_dropout};
}

CvResult run_crossval(const Cohort& cohort, const ExperimentOptions& options) {
    options.train.validate();
    options.bootstrap.validate();
    const Modalities mods = split_modalities(cohort);

    CvResult result;
    result.plan = make_folds(mods.labels, options.k, derive_seed(options.seed, 1));

    // resolve per-model hyperparameters up front
    std::vector<std::pair<int, double>> hyper;
    for (ModelKind model : options.models) {
        if (options.tune) {
            hyper.push_back(tune_hyperparams(cohort, model, options));
        } else {
            hyper.emplace_back(options.hidden_width, options.train.dropout_rate);
        }
    }

    // per-fold training inputs are shared across models
    struct FoldData {
        std::vector<std::size_t> train_idx;
        std::vector<std::size_t> test_idx;
        PreparedInputs train_in;
        PreparedInputs test_in;
        std::vector<int> train_labels;
        std::vector<int> test_labels;
        std::vector<std::string> test_ids;
    };
    std::vector<FoldData> folds(static_cast<std::size_t>(options.k));
    for (int fold = 0; fold < options.k; ++fold) {
        FoldData& fd = folds[static_cast<std::size_t>(fold)];
        for (std::size_t i = 0; i < mods.labels.size(); ++i) {
            (result.plan.assignments[i] == fold ? fd.test_idx : fd.train_idx).push_back(i);
        }
        const auto crf_state =
            fit_preprocessor(take_rows(mods.crf, fd.train_idx), cohort.schema.crf_kinds());
        const auto ecg_state =
            fit_preprocessor(take_rows(mods.ecg, fd.train_idx), cohort.schema.ecg_kinds());
        fd.train_in = {apply_preprocessor(crf_state, take_rows(mods.crf, fd.train_idx)),
                       apply_preprocessor(ecg_state, take_rows(mods.ecg, fd.train_idx))};
        fd.test_in = {apply_preprocessor(crf_state, take_rows(mods.crf, fd.test_idx)),
                      apply_preprocessor(ecg_state, take_rows(mods.ecg, fd.test_idx))};
        for (std::size_t i : fd.train_idx) fd.train_labels.push_back(mods.labels[i]);
        for (std::size_t i : fd.test_idx) {
            fd.test_labels.push_back(mods.labels[i]);
            fd.test_ids.push_back(cohort.rows[i].id);
        }
    }

    result.models.resize(options.models.size());
    const std::size_t n_tasks = options.models.size() * static_cast<std::size_t>(options.k);
    for (std::size_t m = 0; m < options.models.size(); ++m) {
        result.models[m].model = options.models[m];
        result.models[m].hidden_width = hyper[m].first;
        result.models[m].dropout_rate = hyper[m].second;
        result.models[m].folds.resize(static_cast<std::size_t>(options.k));
    }

    const auto metric_names = standard_metric_names();
    parallel_for(n_tasks, [&](std::size_t task) {
        const std::size_t m = task / static_cast<std::size_t>(options.k);
        const int fold = static_cast<int>(task % static_cast<std::size_t>(options.k));
        const ModelKind model = options.models[m];
        const FoldData& fd = folds[static_cast<std::size_t>(fold)];

        TrainConfig config = options.train;
        config.dropout_rate = hyper[m].second;
        const std::uint64_t slot = 2 * (static_cast<std::uint64_t>(fold) * 3 +
                                        static_cast<std::uint64_t>(model_index(model)));
        config.seed = derive_seed(options.seed, 100 + slot);

        const ArchSpec arch =
            arch_for_model(model, cohort.schema, hyper[m].first, hyper[m].second);
        const ModelParams params =
            train(branch_inputs(model, fd.train_in), fd.train_labels, arch, config);

        FoldEval& eval = result.models[m].folds[static_cast<std::size_t>(fold)];
        eval.fold = fold;
        eval.preds.model_name = model_name(model);
        eval.preds.probs = predict(params, branch_inputs(model, fd.test_in));
        eval.preds.labels = fd.test_labels;
        eval.preds.ids = fd.test_ids;

        BootstrapSpec bspec = options.bootstrap;
        bspec.seed = derive_seed(options.seed, 101 + slot);
        eval.metrics = bootstrap_named_metrics(eval.preds, metric_names, bspec);
        eval.youden = youden_threshold(eval.preds.probs, eval.preds.labels);
    });

    // cross-fold averages of each summary component, over folds where the
    // metric is defined
    for (auto& model_result : result.models) {
        for (std::size_t metric = 0; metric < metric_names.size(); ++metric) {
            BootstrapSummary avg;
            std::size_t defined = 0;
            for (const auto& fold : model_result.folds) {
                const auto& s = fold.metrics[metric].second;
                if (!s) continue;
                ++defined;
                avg.point += s->point;
                avg.mean += s->mean;
                avg.sd += s->sd;
                avg.ci_low += s->ci_low;
                avg.ci_high += s->ci_high;
            }
            if (defined == 0) {
                model_result.average.emplace_back(metric_names[metric], std::nullopt);
                continue;
            }
            const double k = static_cast<double>(defined);
            avg.point /= k;
            avg.mean /= k;
            avg.sd /= k;
            avg.ci_low /= k;
            avg.ci_high /= k;
            model_result.average.emplace_back(metric_names[metric], avg);
        }
    }
    return result;
}

LongitudinalResult run_longitudinal(const Cohort& dev, const Cohort& test,
                                    const ExperimentOptions& options, ModelKind compare_base,
                                    ModelKind compare_new) {
    options.train.validate();
    options.bootstrap.validate();

    // same schema, disjoint ids
    const auto dev_features = dev.schema.all_features();
    const auto test_features = test.schema.all_features();
    if (dev_features.size() != test_features.size()) {
        throw SchemaError("development and test cohorts use different schemas");
    }
    for (std::size_t i = 0; i < dev_features.size(); ++i) {
        if (dev_features[i].name != test_features[i].name ||
            dev_features[i].kind != test_features[i].kind) {
            throw SchemaError("development and test cohorts use different schemas");
        }
    }
    std::set<std::string> dev_ids;
    for (const auto& r : dev.rows) dev_ids.insert(r.id);
    for (const auto& r : test.rows) {
        if (dev_ids.count(r.id)) {
            throw LeakageError("row id '" + r.id + "' appears in both cohorts");
        }
    }

    const Modalities dev_mods = split_modalities(dev);
    const Modalities test_mods = split_modalities(test);

    LongitudinalResult result;
    result.crf_state = fit_preprocessor(dev_mods.crf, dev.schema.crf_kinds());
    result.ecg_state = fit_preprocessor(dev_mods.ecg, dev.schema.ecg_kinds());
    const PreparedInputs dev_in{apply_preprocessor(result.crf_state, dev_mods.crf),
                                apply_preprocessor(result.ecg_state, dev_mods.ecg)};
    const PreparedInputs test_in{apply_preprocessor(result.crf_state, test_mods.crf),
                                 apply_preprocessor(result.ecg_state, test_mods.ecg)};

    std::vector<std::pair<int, double>> hyper;
    for (ModelKind model : options.models) {
        if (options.tune) {
            hyper.push_back(tune_hyperparams(dev, model, options));
        } else {
            hyper.emplace_back(options.hidden_width, options.train.dropout_rate);
        }
    }

    result.models.resize(options.models.size());
    const auto metric_names = standard_metric_names();
    parallel_for(options.models.size(), [&](std::size_t m) {
        const ModelKind model = options.models[m];
        TrainConfig config = options.train;
        config.dropout_rate = hyper[m].second;
        config.seed = derive_seed(
            options.seed, 10 + 2 * static_cast<std::uint64_t>(model_index(model)));

        const ArchSpec arch =
            arch_for_model(model, dev.schema, hyper[m].first, hyper[m].second);

        ModelTestEval& eval = result.models[m];
        eval.model = model;
        eval.hidden_width = hyper[m].first;
        eval.dropout_rate = hyper[m].second;
        eval.params = train(branch_inputs(model, dev_in), dev_mods.labels, arch, config);
        eval.preds.model_name = model_name(model);
        eval.preds.probs = predict(eval.params, branch_inputs(model, test_in));
        eval.preds.labels = test_mods.labels;
        for (const auto& r : test.rows) eval.preds.ids.push_back(r.id);

        BootstrapSpec bspec = options.bootstrap;
        bspec.seed = derive_seed(
            options.seed, 11 + 2 * static_cast<std::uint64_t>(model_index(model)));
        eval.metrics = bootstrap_named_metrics(eval.preds, metric_names, bspec);
        eval.youden = youden_threshold(eval.preds.probs, eval.preds.labels);
        eval.roc = roc_curve(eval.preds.probs, eval.preds.labels);
        eval.pr = pr_curve(eval.preds.probs, eval.preds.labels);
        eval.calibration = calibration_bins(eval.preds.probs, eval.preds.labels);
    });

    const ModelTestEval* base = nullptr;
    const ModelTestEval* cand = nullptr;
    for (const auto& eval : result.models) {
        if (eval.model == compare_base) base = &eval;
        if (eval.model == compare_new) cand = &eval;
    }
    if (base != nullptr && cand != nullptr) {
        BootstrapSpec bspec = options.bootstrap;
        bspec.seed = derive_seed(options.seed, 50);
        result.comparison =
            compare_models(model_name(compare_base), base->preds.probs,
                           model_name(compare_new), cand->preds.probs,
                           test_mods.labels, bspec);
    }
    return result;
}

// ---------------------------------------------------------------------------
// JSON reports

namespace {

nlohmann::json summary_to_json(const BootstrapSummary& s) {
    return nlohmann::json{{"point", s.point},
                          {"mean", s.mean},
                          {"sd", s.sd},
                          {"ci_low", s.ci_low},
                          {"ci_high", s.ci_high}};
}

nlohmann::json metrics_to_json(const MetricSummaries& metrics) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, summary] : metrics) {
        j[name] = summary ? summary_to_json(*summary) : nlohmann::json(nullptr);
    }
    return j;
}

nlohmann::json roc_to_json(const RocCurve& curve) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : curve.points) {
        points.push_back(nlohmann::json{{"fpr", p.fpr},
                                        {"tpr", p.tpr},
                                        {"threshold", std::isinf(p.threshold)
                                                          ? nlohmann::json("inf")
                                                          : nlohmann::json(p.threshold)}});
    }
    return nlohmann::json{{"auroc", curve.auroc}, {"points", std::move(points)}};
}

nlohmann::json pr_to_json(const PrCurve& curve) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : curve.points) {
        points.push_back(nlohmann::json{
            {"recall", p.recall}, {"precision", p.precision}, {"threshold", p.threshold}});
    }
    return nlohmann::json{{"auprc", curve.auprc}, {"points", std::move(points)}};
}

nlohmann::json calibration_to_json(const CalibrationCurve& curve) {
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : curve.bins) {
        bins.push_back(nlohmann::json{
            {"mean_pred", b.mean_pred}, {"frac_pos", b.frac_pos}, {"count", b.count}});
    }
    return nlohmann::json{{"brier", curve.brier}, {"bins", std::move(bins)}};
}

}  // namespace

nlohmann::json cv_result_to_json(const CvResult& result) {
    nlohmann::json models = nlohmann::json::object();
    for (const auto& model_result : result.models) {
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& fold : model_result.folds) {
            folds.push_back(nlohmann::json{{"fold", fold.fold},
                                           {"youden_threshold", fold.youden},
                                           {"metrics", metrics_to_json(fold.metrics)}});
        }
        models[model_name(model_result.model)] =
            nlohmann::json{{"hidden_width", model_result.hidden_width},
                           {"dropout_rate", model_result.dropout_rate},
                           {"folds", std::move(folds)},
                           {"average", metrics_to_json(model_result.average)}};
    }
    return nlohmann::json{{"k", result.plan.k},
                          {"stratification_warning", result.plan.class_warning},
                          {"models", std::move(models)}};
}

nlohmann::json longitudinal_result_to_json(const LongitudinalResult& result) {
    nlohmann::json models = nlohmann::json::object();
    for (const auto& eval : result.models) {
        models[model_name(eval.model)] =
            nlohmann::json{{"hidden_width", eval.hidden_width},
                           {"dropout_rate", eval.dropout_rate},
                           {"youden_threshold", eval.youden},
                           {"metrics", metrics_to_json(eval.metrics)},
                           {"roc", roc_to_json(eval.roc)},
                           {"pr", pr_to_json(eval.pr)},
                           {"calibration", calibration_to_json(eval.calibration)}};
    }
    nlohmann::json j{{"models", std::move(models)}};
    if (result.comparison) j["comparison"] = comparison_to_json(*result.comparison);
    return j;
}

}  // namespace dianet
