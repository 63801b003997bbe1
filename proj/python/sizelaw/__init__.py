"""Scaling-law analysis of Java corpora."""

from ._sizelaw import (
    Error,
    beta_normalize,
    compute_metrics,
    count_sloc,
    decorrelation_report,
    evaluate_nrmse,
    extract_project,
    fit_log_power,
    inverse_normal_cdf,
    make_fit,
    pearson,
    predict,
    read_metrics_table,
    render_report,
    run_pipeline,
    spearman,
    student_t_cdf,
    synth,
    welch_t_test,
    wmc_summary,
)

__all__ = [
    "Error",
    "beta_normalize",
    "compute_metrics",
    "count_sloc",
    "decorrelation_report",
    "evaluate_nrmse",
    "extract_project",
    "fit_log_power",
    "inverse_normal_cdf",
    "make_fit",
    "pearson",
    "predict",
    "read_metrics_table",
    "render_report",
    "run_pipeline",
    "spearman",
    "student_t_cdf",
    "synth",
    "welch_t_test",
    "wmc_summary",
]
