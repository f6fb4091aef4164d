"""
The train/evaluate protocol: select features, standardize, fit kNN and CART
on the training trace, then score both on the test trace.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.tsentinel.classifiers import (
    ALGORITHMS,
    CartParams,
    TrainedModel,
    cart_fit,
    get_algorithm_by_name,
    knn_fit,
    predict_rows,
)
from src.tsentinel.config import DEFAULT_HOLDOUT_FRACTION, DEFAULT_K, METRIC_NAMES
from src.tsentinel.errors import EvaluationError
from src.tsentinel.evaluation.metrics import (
    ConfusionMatrix,
    MetricsReport,
    confusion,
    metrics,
)
from src.tsentinel.features.ranking import select_features
from src.tsentinel.features.standardizer import Standardizer, fit_standardizer, standardize
from src.tsentinel.telemetry.matrix import FeatureMatrix, to_feature_matrix
from src.tsentinel.telemetry.models import TelemetryTrace

logger = logging.getLogger("tsentinel.evaluation.experiment")

# Column headers of the results table
TABLE_COLUMNS = ("Accuracy", "Precision", "Recall", "F1-Score")


class Provenance(BaseModel):
    """Where the traces of an experiment came from."""

    model_config = ConfigDict(frozen=True)

    train_sources: List[str] = Field(default_factory=list)
    test_sources: List[str] = Field(default_factory=list)
    seeds: Dict[str, int] = Field(default_factory=dict)
    feature_selection: str = Field(
        default="explicit", description="How the feature list was obtained"
    )


class ClassifierResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    algorithm: str
    confusion: ConfusionMatrix
    metrics: MetricsReport


class ExperimentReport(BaseModel):
    """Everything needed to re-run an experiment and its per-classifier results."""

    model_config = ConfigDict(frozen=True)

    features: List[str]
    knn_k: int
    cart_params: CartParams
    train_samples: int
    train_samples_dropped: int = 0
    test_samples: int
    provenance: Provenance = Field(default_factory=Provenance)
    results: List[ClassifierResult]

    def result(self, algorithm: str) -> ClassifierResult:
        """Look up a result by algorithm id ("kNN" / "CART") or registry key."""
        _, algorithm_id = get_algorithm_by_name(algorithm)
        wanted = algorithm_id or algorithm
        for result in self.results:
            if result.algorithm == wanted:
                return result
        raise KeyError(algorithm)


@dataclass(frozen=True)
class TrainedPipeline:
    """A fitted standardizer and the classifiers trained behind it."""

    feature_names: Tuple[str, ...]
    standardizer: Standardizer
    models: Dict[str, TrainedModel] = field(default_factory=dict)
    train_samples: int = 0
    train_samples_dropped: int = 0


def _feature_matrix(trace: TelemetryTrace, features: Sequence[str]) -> FeatureMatrix:
    return select_features(to_feature_matrix(trace, METRIC_NAMES), features)


def _require_labels(trace: TelemetryTrace, role: str):
    if not trace.is_labeled:
        raise EvaluationError(f"evaluation requires labels ({role} trace is unlabeled)")


def fit_pipeline(
    train: TelemetryTrace,
    features: Sequence[str],
    knn_k: int = DEFAULT_K,
    cart_params: Optional[CartParams] = None,
    train_mask: Optional[np.ndarray] = None,
    parallel: bool = True,
) -> TrainedPipeline:
    """
    Fit the standardizer and both classifiers on a labeled trace.

    Args:
        train: Labeled training trace
        features: Metric names to use, in column order
        knn_k: Neighbour count for kNN
        cart_params: CART growth limits (defaults when None)
        train_mask: Optional boolean vector, True for samples to leave out
        parallel: Fit the two classifiers on separate threads

    Returns:
        TrainedPipeline with "knn" and "cart" models
    """
    _require_labels(train, "training")
    cart_params = cart_params or CartParams()
    matrix = _feature_matrix(train, features)

    dropped = 0
    if train_mask is not None:
        train_mask = np.asarray(train_mask, dtype=bool)
        if train_mask.shape != (matrix.n_rows,):
            raise EvaluationError(
                f"training mask has {train_mask.size} entries for {matrix.n_rows} samples"
            )
        dropped = int(train_mask.sum())
        matrix = matrix.take(np.flatnonzero(~train_mask))
        logger.info(f"Left {dropped} masked samples out of training")

    standardizer = fit_standardizer(matrix)
    scaled = standardize(standardizer, matrix)

    if parallel:
        with ThreadPoolExecutor(max_workers=2) as pool:
            knn_future = pool.submit(knn_fit, scaled, knn_k)
            cart_future = pool.submit(cart_fit, scaled, cart_params)
            models = {"knn": knn_future.result(), "cart": cart_future.result()}
    else:
        models = {"knn": knn_fit(scaled, knn_k), "cart": cart_fit(scaled, cart_params)}

    return TrainedPipeline(
        feature_names=tuple(matrix.feature_names),
        standardizer=standardizer,
        models=models,
        train_samples=matrix.n_rows,
        train_samples_dropped=dropped,
    )


def _evaluate_model(name: str, model: TrainedModel, scaled: FeatureMatrix) -> ClassifierResult:
    start_time = time.time()
    predicted = predict_rows(model, scaled.rows)
    matrix = confusion(predicted, scaled.labels)
    logger.info(
        f"{ALGORITHMS[name]['id']} scored {scaled.n_rows} samples "
        f"in {time.time() - start_time:.2f} seconds"
    )
    return ClassifierResult(
        algorithm=ALGORITHMS[name]["id"], confusion=matrix, metrics=metrics(matrix)
    )


def evaluate_pipeline(
    pipeline: TrainedPipeline, test: TelemetryTrace, parallel: bool = True
) -> List[ClassifierResult]:
    """
    Score every classifier of a pipeline on a labeled test trace.

    Returns:
        One ClassifierResult per model, in registry order
    """
    _require_labels(test, "test")
    scaled = standardize(pipeline.standardizer, _feature_matrix(test, pipeline.feature_names))
    names = [name for name in ALGORITHMS if name in pipeline.models]

    if parallel and len(names) > 1:
        with ThreadPoolExecutor(max_workers=len(names)) as pool:
            futures = [
                pool.submit(_evaluate_model, name, pipeline.models[name], scaled)
                for name in names
            ]
            return [future.result() for future in futures]
    return [_evaluate_model(name, pipeline.models[name], scaled) for name in names]


def run_experiment(
    train: TelemetryTrace,
    test: TelemetryTrace,
    features: Sequence[str],
    knn_k: int = DEFAULT_K,
    cart_params: Optional[CartParams] = None,
    train_mask: Optional[np.ndarray] = None,
    provenance: Optional[Provenance] = None,
) -> ExperimentReport:
    """
    Train kNN and CART on one trace and evaluate both on another.

    The run is deterministic: identical traces and parameters give an
    identical report.

    Raises:
        EvaluationError: If either trace is unlabeled
    """
    _require_labels(train, "training")
    _require_labels(test, "test")
    cart_params = cart_params or CartParams()

    pipeline = fit_pipeline(train, features, knn_k, cart_params, train_mask)
    results = evaluate_pipeline(pipeline, test)
    return build_report(pipeline, results, len(test), knn_k, cart_params, provenance)


def build_report(
    pipeline: TrainedPipeline,
    results: List[ClassifierResult],
    test_samples: int,
    knn_k: int,
    cart_params: CartParams,
    provenance: Optional[Provenance] = None,
) -> ExperimentReport:
    return ExperimentReport(
        features=list(pipeline.feature_names),
        knn_k=knn_k,
        cart_params=cart_params,
        train_samples=pipeline.train_samples,
        train_samples_dropped=pipeline.train_samples_dropped,
        test_samples=test_samples,
        provenance=provenance or Provenance(),
        results=results,
    )


def _subset(trace: TelemetryTrace, indices: np.ndarray) -> TelemetryTrace:
    samples = [
        trace.samples[i].model_copy(update={"t": position * trace.interval})
        for position, i in enumerate(indices)
    ]
    return TelemetryTrace(interval=trace.interval, samples=tuple(samples))


def holdout_split(
    trace: TelemetryTrace,
    fraction: float = DEFAULT_HOLDOUT_FRACTION,
    seed: int = 0,
) -> Tuple[TelemetryTrace, TelemetryTrace]:
    """
    Split a trace into seeded random training and test parts.

    Each part keeps the original sample order and is re-timed from t = 0 so
    it stays a valid uniformly sampled trace.

    Args:
        trace: Trace to split
        fraction: Share of samples that go to the test part, in (0, 1)
        seed: Seed for the permutation

    Returns:
        Tuple of (train, test)
    """
    if not 0 < fraction < 1:
        raise EvaluationError(f"holdout fraction must be in (0, 1), got {fraction}")
    n_test = int(round(len(trace) * fraction))
    if n_test < 1 or n_test >= len(trace):
        raise EvaluationError(
            f"cannot hold out {fraction:.0%} of a {len(trace)}-sample trace"
        )
    order = np.random.default_rng(seed).permutation(len(trace))
    test_indices = np.sort(order[:n_test])
    train_indices = np.sort(order[n_test:])
    return _subset(trace, train_indices), _subset(trace, test_indices)


def format_results_table(report: ExperimentReport) -> str:
    """
    Render the per-classifier results as an aligned text table.

    Rows are classifiers, columns accuracy and the macro-averaged precision,
    recall and F1, all as percentages with two decimals.
    """
    header = ["Algorithm"] + list(TABLE_COLUMNS)
    rows = []
    for result in report.results:
        m = result.metrics
        values = (m.accuracy, m.macro_precision, m.macro_recall, m.macro_f1)
        rows.append([result.algorithm] + [f"{100 * v:.2f}" for v in values])

    widths = [max(len(row[i]) for row in [header] + rows) for i in range(len(header))]
    lines = []
    for row in [header] + rows:
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(width) for cell, width in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells))
    return "\n".join(lines)
