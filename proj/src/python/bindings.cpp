#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "dianet/cohort.hpp"
#include "dianet/errors.hpp"
#include "dianet/experiment.hpp"
#include "dianet/metrics.hpp"
#include "dianet/net.hpp"
#include "dianet/preprocess.hpp"
#include "dianet/reclass.hpp"
#include "dianet/stratify.hpp"
#include "dianet/synthgen.hpp"

namespace py = pybind11;
using namespace dianet;

namespace {

std::vector<FeatureKind> kinds_from_strings(const std::vector<std::string>& kinds) {
    std::vector<FeatureKind> out;
    for (const auto& k : kinds) {
        if (k == "continuous") {
            out.push_back(FeatureKind::Continuous);
        } else if (k == "categorical") {
            out.push_back(FeatureKind::Categorical);
        } else {
            throw ConfigError("feature kind must be continuous or categorical");
        }
    }
    return out;
}

py::dict confusion_to_dict(const Confusion& c) {
    py::dict d;
    d["tp"] = c.tp;
    d["fp"] = c.fp;
    d["tn"] = c.tn;
    d["fn"] = c.fn;
    auto set = [&d](const char* name, const std::optional<double>& v) {
        if (v) d[name] = *v; else d[name] = py::none();
    };
    set("sensitivity", c.sensitivity);
    set("specificity", c.specificity);
    set("ppv", c.ppv);
    set("npv", c.npv);
    set("f1", c.f1);
    set("accuracy", c.accuracy);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multimodal T2DM risk prediction: preprocessing, dense nets, "
              "ROC/reclassification statistics and synthetic cohorts";

    // ---- metrics
    m.def("auroc", [](std::vector<double> p, std::vector<int> y) { return auroc(p, y); },
          py::arg("probs"), py::arg("labels"));
    m.def("auprc", [](std::vector<double> p, std::vector<int> y) { return auprc(p, y); },
          py::arg("probs"), py::arg("labels"));
    m.def("brier", [](std::vector<double> p, std::vector<int> y) { return brier(p, y); },
          py::arg("probs"), py::arg("labels"));
    m.def("youden_threshold",
          [](std::vector<double> p, std::vector<int> y) { return youden_threshold(p, y); },
          py::arg("probs"), py::arg("labels"));
    m.def("confusion_at_threshold",
          [](std::vector<double> p, std::vector<int> y, double t) {
              return confusion_to_dict(confusion_at_threshold(p, y, t));
          },
          py::arg("probs"), py::arg("labels"), py::arg("threshold"));
    m.def("calibration_bins",
          [](std::vector<double> p, std::vector<int> y, std::size_t n_bins) {
              const auto curve = calibration_bins(p, y, n_bins);
              std::vector<std::tuple<double, double, std::size_t>> bins;
              for (const auto& b : curve.bins) bins.emplace_back(b.mean_pred, b.frac_pos, b.count);
              return py::make_tuple(bins, curve.brier);
          },
          py::arg("probs"), py::arg("labels"), py::arg("n_bins") = 10);

    // ---- paired comparisons
    m.def("delong_test",
          [](std::vector<double> a, std::vector<double> b, std::vector<int> y) {
              const auto r = delong_test(a, b, y);
              return py::make_tuple(r.theta_a, r.theta_b, r.z, r.p);
          },
          py::arg("probs_a"), py::arg("probs_b"), py::arg("labels"));
    m.def("nri_categorical",
          [](std::vector<double> po, std::vector<double> pn, std::vector<int> y,
             std::vector<double> cutpoints) {
              return nri_categorical(po, pn, y, cutpoints).nri;
          },
          py::arg("probs_old"), py::arg("probs_new"), py::arg("labels"), py::arg("cutpoints"));
    m.def("nri_continuous",
          [](std::vector<double> po, std::vector<double> pn, std::vector<int> y) {
              return nri_continuous(po, pn, y);
          },
          py::arg("probs_old"), py::arg("probs_new"), py::arg("labels"));
    m.def("idi",
          [](std::vector<double> po, std::vector<double> pn, std::vector<int> y) {
              return idi(po, pn, y);
          },
          py::arg("probs_old"), py::arg("probs_new"), py::arg("labels"));

    // ---- preprocessing (missing values arrive as None)
    m.def("fit_preprocessor",
          [](const MaybeMatrix& train, const std::vector<std::string>& kinds) {
              return preprocessor_to_json(fit_preprocessor(train, kinds_from_strings(kinds)))
                  .dump();
          },
          py::arg("train"), py::arg("kinds"));
    m.def("apply_preprocessor",
          [](const std::string& state_json, const MaybeMatrix& matrix) {
              return apply_preprocessor(
                  preprocessor_from_json(nlohmann::json::parse(state_json)), matrix);
          },
          py::arg("state_json"), py::arg("matrix"));

    // ---- neural core
    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("weight_decay", &TrainConfig::weight_decay)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("dropout_rate", &TrainConfig::dropout_rate)
        .def_readwrite("seed", &TrainConfig::seed);

    m.def("train_model",
          [](const std::vector<Matrix>& branches, std::vector<int> labels,
             const std::string& model, int hidden_width, const TrainConfig& config) {
              const ArchSpec arch = arch_for_model(model_from_name(model), default_schema(),
                                                   hidden_width, config.dropout_rate);
              return params_to_json(train(branches, labels, arch, config)).dump();
          },
          py::arg("branches"), py::arg("labels"), py::arg("model"), py::arg("hidden_width"),
          py::arg("config"));
    m.def("predict_model",
          [](const std::string& params_json, const std::vector<Matrix>& branches) {
              return predict(params_from_json(nlohmann::json::parse(params_json)), branches);
          },
          py::arg("params_json"), py::arg("branches"));

    // ---- experiment-level helpers
    m.def("make_folds",
          [](std::vector<int> labels, int k, std::uint64_t seed) {
              return make_folds(labels, k, seed).assignments;
          },
          py::arg("labels"), py::arg("k"), py::arg("seed"));
    m.def("bootstrap_metric",
          [](const std::string& metric, std::vector<double> probs, std::vector<int> labels,
             int n_resamples, std::uint64_t seed, double ci_level) {
              PredictionSet predset{"py", std::move(probs), std::move(labels), {}};
              BootstrapSpec spec{n_resamples, seed, ci_level};
              const auto s = bootstrap_metric(
                  predset,
                  [&metric](std::span<const double> p, std::span<const int> y) {
                      return eval_named_metric(metric, p, y);
                  },
                  spec);
              py::dict d;
              d["point"] = s.point;
              d["mean"] = s.mean;
              d["sd"] = s.sd;
              d["ci_low"] = s.ci_low;
              d["ci_high"] = s.ci_high;
              return d;
          },
          py::arg("metric"), py::arg("probs"), py::arg("labels"), py::arg("n_resamples") = 1000,
          py::arg("seed") = 0, py::arg("ci_level") = 0.95);

    // ---- stratification
    m.def("assign_risk_groups",
          [](std::vector<double> scores, double low_q, double high_q) {
              const auto groups = assign_risk_groups(scores, low_q, high_q);
              std::vector<std::string> names;
              for (RiskGroup g : groups.assignment) names.push_back(risk_group_name(g));
              return py::make_tuple(groups.t_low, groups.t_high, names);
          },
          py::arg("scores"), py::arg("low_quantile") = 0.2, py::arg("high_quantile") = 0.8);
    m.def("group_ppv",
          [](std::vector<double> scores, std::vector<int> labels, double low_q, double high_q) {
              const auto groups = assign_risk_groups(scores, low_q, high_q);
              py::dict d;
              for (const auto& [group, stats] : group_ppv(groups, labels)) {
                  py::dict g;
                  g["count"] = stats.count;
                  g["positives"] = stats.positives;
                  if (stats.ppv) g["ppv"] = *stats.ppv; else g["ppv"] = py::none();
                  d[risk_group_name(group).c_str()] = g;
              }
              return d;
          },
          py::arg("scores"), py::arg("labels"), py::arg("low_quantile") = 0.2,
          py::arg("high_quantile") = 0.8);

    // ---- synthetic cohorts and end-to-end runs
    m.def("default_scenario_json", [](std::uint64_t seed) {
        const auto [dev, test] = default_scenario(seed);
        return py::make_tuple(gen_config_to_json(dev).dump(), gen_config_to_json(test).dump());
    },
          py::arg("seed") = 0);
    m.def("generate_cohort_csv",
          [](const std::string& config_json, const std::string& path) {
              const auto config = gen_config_from_json(nlohmann::json::parse(config_json));
              save_cohort(path, generate_cohort(config));
          },
          py::arg("config_json"), py::arg("path"));
    m.def("load_cohort_arrays",
          [](const std::string& path) {
              const Cohort cohort = load_cohort(path, default_schema());
              const Modalities mods = split_modalities(cohort);
              std::vector<std::string> ids;
              for (const auto& r : cohort.rows) ids.push_back(r.id);
              return py::make_tuple(ids, mods.crf, mods.ecg, mods.labels);
          },
          py::arg("path"));
    m.def("run_longitudinal_json",
          [](const std::string& dev_csv, const std::string& test_csv, std::uint64_t seed,
             int bootstraps, int epochs) {
              ExperimentOptions options;
              options.seed = seed;
              options.train.seed = seed;
              options.train.epochs = epochs;
              options.bootstrap.n_resamples = bootstraps;
              const Cohort dev = load_cohort(dev_csv, default_schema());
              const Cohort test = load_cohort(test_csv, default_schema());
              const auto result = run_longitudinal(dev, test, options);
              return longitudinal_result_to_json(result).dump();
          },
          py::arg("dev_csv"), py::arg("test_csv"), py::arg("seed") = 0,
          py::arg("bootstraps") = 200, py::arg("epochs") = 20);

    // error mapping so python callers see ValueError-style failures
    py::register_exception<SchemaError>(m, "SchemaError");
    py::register_exception<UndefinedMetricError>(m, "UndefinedMetricError");
    py::register_exception<StratificationError>(m, "StratificationError");
}
