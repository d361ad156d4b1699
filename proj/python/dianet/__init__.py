"""Multimodal T2DM risk prediction toolkit.

Thin python surface over the C++ core: metrics (AUROC, AUPRC, Brier,
calibration), paired-model statistics (DeLong, NRI, cNRI, IDI), the
preprocessing pipeline, dense-network training, bootstrap summaries,
risk stratification and synthetic cohort generation.
"""

from ._core import (  # noqa: F401
    SchemaError,
    StratificationError,
    TrainConfig,
    UndefinedMetricError,
    apply_preprocessor,
    assign_risk_groups,
    auprc,
    auroc,
    bootstrap_metric,
    brier,
    calibration_bins,
    confusion_at_threshold,
    default_scenario_json,
    delong_test,
    fit_preprocessor,
    generate_cohort_csv,
    group_ppv,
    idi,
    load_cohort_arrays,
    make_folds,
    nri_categorical,
    nri_continuous,
    predict_model,
    run_longitudinal_json,
    train_model,
    youden_threshold,
)

__all__ = [
    "SchemaError",
    "StratificationError",
    "TrainConfig",
    "UndefinedMetricError",
    "apply_preprocessor",
    "assign_risk_groups",
    "auprc",
    "auroc",
    "bootstrap_metric",
    "brier",
    "calibration_bins",
    "confusion_at_threshold",
    "default_scenario_json",
    "delong_test",
    "fit_preprocessor",
    "generate_cohort_csv",
    "group_ppv",
    "idi",
    "load_cohort_arrays",
    "make_folds",
    "nri_categorical",
    "nri_continuous",
    "predict_model",
    "run_longitudinal_json",
    "train_model",
    "youden_threshold",
]

__version__ = "0.1.0"
