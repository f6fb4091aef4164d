"""
Confusion matrices, Table-style metrics and the train/evaluate protocol.
"""

from src.tsentinel.evaluation.experiment import (
    ClassifierResult,
    ExperimentReport,
    Provenance,
    TrainedPipeline,
    build_report,
    evaluate_pipeline,
    fit_pipeline,
    format_results_table,
    holdout_split,
    run_experiment,
)
from src.tsentinel.evaluation.metrics import (
    ClassMetrics,
    ConfusionMatrix,
    MetricsReport,
    confusion,
    metrics,
    micro_average,
)

__all__ = [
    "ClassMetrics",
    "ClassifierResult",
    "ConfusionMatrix",
    "ExperimentReport",
    "MetricsReport",
    "Provenance",
    "TrainedPipeline",
    "build_report",
    "confusion",
    "evaluate_pipeline",
    "fit_pipeline",
    "format_results_table",
    "holdout_split",
    "metrics",
    "micro_average",
    "run_experiment",
]
