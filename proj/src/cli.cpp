#include "dianet/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dianet/cohort.hpp"
#include "dianet/csv.hpp"
#include "dianet/errors.hpp"
#include "dianet/experiment.hpp"
#include "dianet/rng.hpp"
#include "dianet/stratify.hpp"
#include "dianet/synthgen.hpp"

namespace dianet {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("config file " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

// override leaves win, objects merge recursively
json deep_merge(json base, const json& override_json) {
    if (!base.is_object() || !override_json.is_object()) return override_json;
    for (const auto& [key, value] : override_json.items()) {
        if (base.contains(key)) {
            base[key] = deep_merge(base[key], value);
        } else {
            base[key] = value;
        }
    }
    return base;
}

std::vector<ModelKind> parse_models(const std::string& list) {
    std::vector<std::string> requested;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) requested.push_back(item);
    }
    for (const auto& name : requested) model_from_name(name);  // validate
    std::vector<ModelKind> models;
    for (ModelKind kind : all_models()) {  // canonical order
        for (const auto& name : requested) {
            if (model_from_name(name) == kind) {
                models.push_back(kind);
                break;
            }
        }
    }
    if (models.empty()) throw ConfigError("--models selected no model");
    return models;
}

void ensure_out_dir(const std::string& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create output directory: " + out);
}

// --------------------------------------------------------------------------
// shared experiment flags

struct ExperimentFlags {
    std::string dev_path;
    std::string test_path;
    std::string out_dir;
    std::string config_path;
    std::string models = "crf_only,ecg_only,fused";
    std::uint64_t seed = 0;
    int folds = 5;
    int bootstraps = 1000;
    bool tune = false;
    int hidden_width = 32;
    double learning_rate = 5e-4;
    double weight_decay = 5e-6;
    int epochs = 20;
    int batch_size = 16;
    double dropout_rate = 0.2;
    double ci_level = 0.95;
};

void add_train_flags(CLI::App* cmd, ExperimentFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Root seed");
    cmd->add_option("--bootstraps", flags.bootstraps, "Bootstrap resamples per metric");
    cmd->add_option("--models", flags.models, "Comma-separated subset of crf_only,ecg_only,fused");
    cmd->add_flag("--tune", flags.tune, "Grid-search hidden width and dropout by CV AUROC");
    cmd->add_option("--hidden-width", flags.hidden_width, "First hidden layer width");
    cmd->add_option("--train.learning_rate", flags.learning_rate, "Adam learning rate");
    cmd->add_option("--train.weight_decay", flags.weight_decay, "L2 weight decay");
    cmd->add_option("--train.epochs", flags.epochs, "Training epochs");
    cmd->add_option("--train.batch_size", flags.batch_size, "Mini-batch size");
    cmd->add_option("--train.dropout_rate", flags.dropout_rate, "Dropout rate");
    cmd->add_option("--bootstrap.ci_level", flags.ci_level, "Bootstrap CI level");
}

// apply config-file leaves for keys the command line did not set
void merge_experiment_config(const json& cfg, const CLI::App* cmd, ExperimentFlags& flags) {
    auto set_if_unset = [&](const char* flag, const json* node, auto& target) {
        if (node != nullptr && cmd->count(flag) == 0) {
            target = node->get<std::decay_t<decltype(target)>>();
        }
    };
    auto find = [&cfg](std::initializer_list<const char*> path) -> const json* {
        const json* node = &cfg;
        for (const char* key : path) {
            if (!node->is_object() || !node->contains(key)) return nullptr;
            node = &(*node)[key];
        }
        return node;
    };
    set_if_unset("--seed", find({"seed"}), flags.seed);
    set_if_unset("--folds", find({"folds"}), flags.folds);
    set_if_unset("--bootstraps", find({"bootstrap", "n_resamples"}), flags.bootstraps);
    set_if_unset("--bootstrap.ci_level", find({"bootstrap", "ci_level"}), flags.ci_level);
    set_if_unset("--models", find({"models"}), flags.models);
    set_if_unset("--hidden-width", find({"hidden_width"}), flags.hidden_width);
    set_if_unset("--train.learning_rate", find({"train", "learning_rate"}), flags.learning_rate);
    set_if_unset("--train.weight_decay", find({"train", "weight_decay"}), flags.weight_decay);
    set_if_unset("--train.epochs", find({"train", "epochs"}), flags.epochs);
    set_if_unset("--train.batch_size", find({"train", "batch_size"}), flags.batch_size);
    set_if_unset("--train.dropout_rate", find({"train", "dropout_rate"}), flags.dropout_rate);
    if (const json* node = find({"tune"}); node != nullptr && cmd->count("--tune") == 0) {
        flags.tune = node->get<bool>();
    }
    set_if_unset("--dev", find({"dev"}), flags.dev_path);
    set_if_unset("--test", find({"test"}), flags.test_path);
    set_if_unset("--out", find({"out"}), flags.out_dir);
}

ExperimentOptions to_options(const ExperimentFlags& flags) {
    ExperimentOptions options;
    options.k = flags.folds;
    options.seed = flags.seed;
    options.models = parse_models(flags.models);
    options.hidden_width = flags.hidden_width;
    options.tune = flags.tune;
    options.train.learning_rate = flags.learning_rate;
    options.train.weight_decay = flags.weight_decay;
    options.train.epochs = flags.epochs;
    options.train.batch_size = flags.batch_size;
    options.train.dropout_rate = flags.dropout_rate;
    options.bootstrap.n_resamples = flags.bootstraps;
    options.bootstrap.ci_level = flags.ci_level;
    options.train.validate();
    options.bootstrap.validate();
    return options;
}

json resolved_config_json(const ExperimentFlags& flags, bool with_folds) {
    json j{{"seed", flags.seed},
           {"models", flags.models},
           {"hidden_width", flags.hidden_width},
           {"tune", flags.tune},
           {"train",
            {{"learning_rate", flags.learning_rate},
             {"weight_decay", flags.weight_decay},
             {"epochs", flags.epochs},
             {"batch_size", flags.batch_size},
             {"dropout_rate", flags.dropout_rate}}},
           {"bootstrap", {{"n_resamples", flags.bootstraps}, {"ci_level", flags.ci_level}}},
           {"dev", flags.dev_path},
           {"out", flags.out_dir}};
    if (with_folds) j["folds"] = flags.folds;
    if (!flags.test_path.empty()) j["test"] = flags.test_path;
    return j;
}

// --------------------------------------------------------------------------
// generate

int cmd_generate(const std::string& scenario, const std::string& config_path,
                 std::uint64_t seed, bool seed_given, const std::string& out,
                 std::ostream& os) {
    GenConfig dev;
    GenConfig test;
    if (scenario == "default") {
        std::tie(dev, test) = default_scenario(seed);
    } else if (scenario == "null") {
        std::tie(dev, test) = null_scenario(seed);
    } else {
        throw ConfigError("unknown scenario: " + scenario + " (expected default or null)");
    }

    if (!config_path.empty()) {
        const json cfg = load_json_file(config_path);
        const bool dev_seed_in_file = cfg.contains("dev") && cfg["dev"].contains("seed");
        const bool test_seed_in_file = cfg.contains("test") && cfg["test"].contains("seed");
        if (cfg.contains("dev")) {
            dev = gen_config_from_json(deep_merge(gen_config_to_json(dev), cfg["dev"]));
        }
        if (cfg.contains("test")) {
            test = gen_config_from_json(deep_merge(gen_config_to_json(test), cfg["test"]));
        }
        // --seed beats file-level defaults but not explicit per-cohort seeds
        if (seed_given && !dev_seed_in_file) dev.seed = derive_seed(seed, 3);
        if (seed_given && !test_seed_in_file) test.seed = derive_seed(seed, 4);
    }

    ensure_out_dir(out);
    const Cohort dev_cohort = generate_cohort(dev);
    const Cohort test_cohort = generate_cohort(test);
    save_cohort((fs::path(out) / "dev.csv").string(), dev_cohort);
    save_cohort((fs::path(out) / "test.csv").string(), test_cohort);

    auto prevalence = [](const Cohort& c) {
        std::size_t pos = 0;
        for (const auto& r : c.rows) pos += (r.label == 1);
        return static_cast<double>(pos) / static_cast<double>(c.rows.size());
    };
    os << "dev.csv: " << dev_cohort.rows.size() << " rows, prevalence "
       << format_double(prevalence(dev_cohort)) << "\n";
    os << "test.csv: " << test_cohort.rows.size() << " rows, prevalence "
       << format_double(prevalence(test_cohort)) << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// cv

void write_fold_predictions(const fs::path& path, const ModelCvResult& model_result) {
    CsvTable table;
    table.header = {"id", "prob", "label", "fold"};
    for (const auto& fold : model_result.folds) {
        for (std::size_t i = 0; i < fold.preds.probs.size(); ++i) {
            table.rows.push_back({fold.preds.ids[i], format_double(fold.preds.probs[i]),
                                  std::to_string(fold.preds.labels[i]),
                                  std::to_string(fold.fold)});
        }
    }
    write_csv(path.string(), table);
}

int cmd_cv(const ExperimentFlags& flags, std::ostream& os) {
    if (flags.dev_path.empty()) throw ConfigError("cv needs --dev (or config value)");
    if (flags.out_dir.empty()) throw ConfigError("cv needs --out (or config value)");
    const Cohort cohort = load_cohort(flags.dev_path, default_schema());
    const ExperimentOptions options = to_options(flags);

    const CvResult result = run_crossval(cohort, options);

    ensure_out_dir(flags.out_dir);
    json report = cv_result_to_json(result);
    report["command"] = "cv";
    report["seed"] = flags.seed;
    report["config"] = resolved_config_json(flags, /*with_folds=*/true);
    write_json_file(fs::path(flags.out_dir) / "cv_report.json", report);

    for (const auto& model_result : result.models) {
        write_fold_predictions(fs::path(flags.out_dir) /
                                   ("cv_predictions_" + model_name(model_result.model) + ".csv"),
                               model_result);
    }
    os << "cv_report.json written (" << result.models.size() << " models, k=" << result.plan.k
       << ")\n";
    return 0;
}

// --------------------------------------------------------------------------
// predict-risk

void write_predictions(const fs::path& path, const LongitudinalResult& result) {
    CsvTable table;
    table.header = {"model", "id", "prob", "label"};
    for (const auto& eval : result.models) {
        for (std::size_t i = 0; i < eval.preds.probs.size(); ++i) {
            table.rows.push_back({eval.preds.model_name, eval.preds.ids[i],
                                  format_double(eval.preds.probs[i]),
                                  std::to_string(eval.preds.labels[i])});
        }
    }
    write_csv(path.string(), table);
}

int cmd_predict_risk(const ExperimentFlags& flags, const std::string& compare, bool save_models,
                     std::ostream& os) {
    if (flags.dev_path.empty()) throw ConfigError("predict-risk needs --dev (or config value)");
    if (flags.test_path.empty()) throw ConfigError("predict-risk needs --test (or config value)");
    if (flags.out_dir.empty()) throw ConfigError("predict-risk needs --out (or config value)");

    const auto colon = compare.find(':');
    if (colon == std::string::npos) throw ConfigError("--compare expects BASE:NEW");
    const ModelKind base = model_from_name(compare.substr(0, colon));
    const ModelKind cand = model_from_name(compare.substr(colon + 1));

    const Cohort dev = load_cohort(flags.dev_path, default_schema());
    const Cohort test = load_cohort(flags.test_path, default_schema());
    const ExperimentOptions options = to_options(flags);

    const LongitudinalResult result = run_longitudinal(dev, test, options, base, cand);

    ensure_out_dir(flags.out_dir);
    json report = longitudinal_result_to_json(result);
    report["command"] = "predict-risk";
    report["seed"] = flags.seed;
    report["config"] = resolved_config_json(flags, /*with_folds=*/false);
    report["config"]["compare"] = compare;
    write_json_file(fs::path(flags.out_dir) / "test_report.json", report);

    if (result.comparison) {
        write_json_file(fs::path(flags.out_dir) / "comparison.json",
                        comparison_to_json(*result.comparison));
    }
    write_predictions(fs::path(flags.out_dir) / "predictions.csv", result);

    // Figure-style curve exports follow the fused model when present
    const ModelTestEval* curves = nullptr;
    for (const auto& eval : result.models) {
        if (eval.model == ModelKind::Fused) curves = &eval;
    }
    if (curves == nullptr && !result.models.empty()) curves = &result.models.front();
    if (curves != nullptr) {
        write_roc_csv((fs::path(flags.out_dir) / "roc.csv").string(), curves->roc);
        write_pr_csv((fs::path(flags.out_dir) / "pr.csv").string(), curves->pr);
        write_calibration_csv((fs::path(flags.out_dir) / "calibration.csv").string(),
                              curves->calibration);
    }

    if (save_models) {
        for (const auto& eval : result.models) {
            write_json_file(fs::path(flags.out_dir) /
                                ("model_" + model_name(eval.model) + ".json"),
                            params_to_json(eval.params));
        }
        write_json_file(fs::path(flags.out_dir) / "preprocessor_crf.json",
                        preprocessor_to_json(result.crf_state));
        write_json_file(fs::path(flags.out_dir) / "preprocessor_ecg.json",
                        preprocessor_to_json(result.ecg_state));
    }
    os << "test_report.json written (" << result.models.size() << " models)\n";
    return 0;
}

// --------------------------------------------------------------------------
// stratify

int cmd_stratify(const std::string& predictions_path, const std::string& out,
                 double low_q, double high_q, std::ostream& os) {
    const CsvTable table = read_csv(predictions_path);
    std::map<std::string, std::size_t> cols;
    for (std::size_t i = 0; i < table.header.size(); ++i) cols[table.header[i]] = i;
    for (const char* required : {"model", "prob", "label"}) {
        if (!cols.count(required)) {
            throw SchemaError("predictions CSV missing column: " + std::string(required));
        }
    }

    // group rows by model, keeping first-appearance order
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::vector<double>, std::vector<int>>> by_model;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string& model = row[cols["model"]];
        if (!by_model.count(model)) order.push_back(model);
        auto& [probs, labels] = by_model[model];
        try {
            probs.push_back(std::stod(row[cols["prob"]]));
        } catch (const std::exception&) {
            throw ParseError("bad prob value at row " + std::to_string(r + 1));
        }
        const std::string& label = row[cols["label"]];
        if (label != "0" && label != "1") {
            throw LabelError("label outside {0,1} at row " + std::to_string(r + 1));
        }
        labels.push_back(label == "1" ? 1 : 0);
    }
    if (order.empty()) throw StratificationError("predictions CSV has no rows");

    ensure_out_dir(out);
    CsvTable groups_csv;
    groups_csv.header = {"model", "group", "count", "positives", "ppv"};
    for (const auto& model : order) {
        const auto& [probs, labels] = by_model[model];
        const RiskGroups groups = assign_risk_groups(probs, low_q, high_q);
        for (const auto& [group, stats] : group_ppv(groups, labels)) {
            groups_csv.rows.push_back({model, risk_group_name(group),
                                       std::to_string(stats.count),
                                       std::to_string(stats.positives),
                                       stats.ppv ? format_double(*stats.ppv) : "NA"});
        }
    }
    write_csv((fs::path(out) / "groups.csv").string(), groups_csv);
    os << "groups.csv written (" << order.size() << " models)\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multimodal T2DM risk prediction experiments on synthetic cohorts"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write synthetic dev.csv and test.csv");
    std::string gen_scenario = "default";
    std::string gen_config;
    std::string gen_out;
    std::uint64_t gen_seed = 0;
    gen->add_option("--scenario", gen_scenario, "default or null");
    gen->add_option("--config", gen_config, "JSON with dev/test generator overrides");
    gen->add_option("--seed", gen_seed, "Root seed");
    gen->add_option("--out", gen_out, "Output directory")->required();

    // cv
    auto* cv = app.add_subcommand("cv", "Stratified cross-validation with bootstrap metrics");
    ExperimentFlags cv_flags;
    cv->add_option("--dev", cv_flags.dev_path, "Development cohort CSV");
    cv->add_option("--out", cv_flags.out_dir, "Output directory")->required();
    cv->add_option("--config", cv_flags.config_path, "JSON run config");
    cv->add_option("--folds", cv_flags.folds, "Number of folds");
    add_train_flags(cv, cv_flags);

    // predict-risk
    auto* pr = app.add_subcommand(
        "predict-risk", "Train on the development cohort, evaluate the longitudinal cohort");
    ExperimentFlags pr_flags;
    std::string pr_compare = "crf_only:fused";
    bool pr_save_models = false;
    pr->add_option("--dev", pr_flags.dev_path, "Development cohort CSV");
    pr->add_option("--test", pr_flags.test_path, "Longitudinal test cohort CSV");
    pr->add_option("--out", pr_flags.out_dir, "Output directory")->required();
    pr->add_option("--config", pr_flags.config_path, "JSON run config");
    pr->add_option("--compare", pr_compare, "Model pair BASE:NEW for the comparison report");
    pr->add_flag("--save-models", pr_save_models, "Also write model and preprocessor JSON");
    add_train_flags(pr, pr_flags);

    // stratify
    auto* st = app.add_subcommand("stratify", "Quantile risk groups and per-group PPV");
    std::string st_predictions;
    std::string st_out;
    double st_low = 0.2;
    double st_high = 0.8;
    st->add_option("--predictions", st_predictions, "predictions.csv from predict-risk")
        ->required();
    st->add_option("--out", st_out, "Output directory")->required();
    st->add_option("--low-quantile", st_low, "Low-risk quantile");
    st->add_option("--high-quantile", st_high, "High-risk quantile");

    std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 takes reversed args
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(gen_scenario, gen_config, gen_seed, gen->count("--seed") > 0,
                                gen_out, out);
        }
        if (cv->parsed()) {
            if (!cv_flags.config_path.empty()) {
                merge_experiment_config(load_json_file(cv_flags.config_path), cv, cv_flags);
            }
            return cmd_cv(cv_flags, out);
        }
        if (pr->parsed()) {
            if (!pr_flags.config_path.empty()) {
                const json cfg = load_json_file(pr_flags.config_path);
                merge_experiment_config(cfg, pr, pr_flags);
                if (cfg.contains("compare") && pr->count("--compare") == 0) {
                    pr_compare = cfg["compare"].get<std::string>();
                }
            }
            return cmd_predict_risk(pr_flags, pr_compare, pr_save_models, out);
        }
        if (st->parsed()) {
            return cmd_stratify(st_predictions, st_out, st_low, st_high, out);
        }
        err << "usage error: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const LeakageError& e) {
        err << "leakage error: " << e.what() << "\n";
        return 4;
    } catch (const StratificationError& e) {
        err << "analysis error: " << e.what() << "\n";
        return 5;
    } catch (const UndefinedMetricError& e) {
        err << "analysis error: " << e.what() << "\n";
        return 5;
    } catch (const BootstrapError& e) {
        err << "analysis error: " << e.what() << "\n";
        return 5;
    } catch (const DegenerateVarianceError& e) {
        err << "analysis error: " << e.what() << "\n";
        return 5;
    } catch (const TrainingError& e) {
        err << "analysis error: " << e.what() << "\n";
        return 5;
    } catch (const FitError& e) {
        err << "analysis error: " << e.what() << "\n";
        return 5;
    } catch (const IoError& e) {
        err << "input error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return 3;
    } catch (const SchemaError& e) {
        err << "input error: " << e.what() << "\n";
        return 3;
    } catch (const LabelError& e) {
        err << "input error: " << e.what() << "\n";
        return 3;
    } catch (const DimensionError& e) {
        err << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace dianet
