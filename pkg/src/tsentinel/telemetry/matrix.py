"""
Feature matrices: the numeric view of a trace handed to the ML stages.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from src.tsentinel.config import METRIC_NAMES
from src.tsentinel.errors import FeatureError
from src.tsentinel.telemetry.models import Label, TelemetryTrace

logger = logging.getLogger("tsentinel.telemetry.matrix")


def check_feature_names(feature_names: Sequence[str]) -> Tuple[str, ...]:
    """
    Validate a list of metric names.

    Args:
        feature_names: Names to check

    Returns:
        The names as a tuple

    Raises:
        FeatureError: On an empty list, an unknown name or a duplicate
    """
    names = tuple(feature_names)
    if not names:
        raise FeatureError("feature name list is empty")
    for name in names:
        if name not in METRIC_NAMES:
            raise FeatureError(f"unknown feature name: {name!r}")
    if len(set(names)) != len(names):
        raise FeatureError(f"duplicate feature names in {list(names)}")
    return names


@dataclass(frozen=True)
class FeatureMatrix:
    """An n x d matrix of metric values with optional per-row labels."""

    feature_names: Tuple[str, ...]
    rows: np.ndarray
    labels: Optional[Tuple[Label, ...]] = None

    def __post_init__(self):
        names = check_feature_names(self.feature_names)
        rows = np.array(self.rows, dtype=np.float64)
        if rows.ndim == 1 and rows.size == 0:
            rows = rows.reshape(0, len(names))
        if rows.ndim != 2 or rows.shape[1] != len(names):
            raise FeatureError(
                f"rows have shape {rows.shape}, expected (n, {len(names)})"
            )
        rows.flags.writeable = False
        labels = None if self.labels is None else tuple(Label(l) for l in self.labels)
        if labels is not None and len(labels) != rows.shape[0]:
            raise FeatureError(
                f"{rows.shape[0]} rows but {len(labels)} labels"
            )
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_features(self) -> int:
        return self.rows.shape[1]

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def attack_flags(self) -> np.ndarray:
        """Return labels as a 0/1 integer vector (1 = attack)."""
        if self.labels is None:
            raise FeatureError("feature matrix is unlabeled")
        return np.array([label is Label.ATTACK for label in self.labels], dtype=np.int64)

    def take(self, indices: Sequence[int]) -> "FeatureMatrix":
        """Return the matrix restricted to the given row indices, in that order."""
        index = np.asarray(indices, dtype=np.int64)
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[i] for i in index)
        return FeatureMatrix(self.feature_names, self.rows[index], labels)


def to_feature_matrix(
    trace: TelemetryTrace, feature_names: Sequence[str]
) -> FeatureMatrix:
    """
    Build a feature matrix from a trace.

    Args:
        trace: Source trace
        feature_names: Metric names, in the desired column order

    Returns:
        FeatureMatrix with one row per sample; labels are copied when present
    """
    names = check_feature_names(feature_names)
    rows = np.array(
        [[getattr(sample, name) for name in names] for sample in trace.samples],
        dtype=np.float64,
    ).reshape(len(trace.samples), len(names))
    labels = tuple(trace.labels) if trace.is_labeled else None
    logger.debug(f"Built {rows.shape[0]}x{rows.shape[1]} feature matrix")
    return FeatureMatrix(names, rows, labels)
