"""
Z-score standardization of feature matrices.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.tsentinel.errors import FeatureError
from src.tsentinel.telemetry.matrix import FeatureMatrix, check_feature_names

logger = logging.getLogger("tsentinel.features.standardizer")


@dataclass(frozen=True)
class Standardizer:
    """Per-feature mean and population standard deviation."""

    feature_names: Tuple[str, ...]
    mean: np.ndarray
    stddev: np.ndarray

    def __post_init__(self):
        names = check_feature_names(self.feature_names)
        mean = np.array(self.mean, dtype=np.float64)
        stddev = np.array(self.stddev, dtype=np.float64)
        if mean.shape != (len(names),) or stddev.shape != (len(names),):
            raise FeatureError("standardizer mean/stddev length does not match feature names")
        if np.any(stddev < 0) or not np.all(np.isfinite(stddev)):
            raise FeatureError("standardizer stddev entries must be finite and >= 0")
        mean.flags.writeable = False
        stddev.flags.writeable = False
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "stddev", stddev)

    @property
    def constant_features(self) -> Tuple[str, ...]:
        return tuple(n for n, s in zip(self.feature_names, self.stddev) if s == 0)

    def transform_rows(self, rows: np.ndarray) -> np.ndarray:
        """Standardize raw rows; constant features map to 0."""
        rows = np.asarray(rows, dtype=np.float64)
        scale = np.where(self.stddev > 0, self.stddev, 1.0)
        out = (rows - self.mean) / scale
        out[..., self.stddev == 0] = 0.0
        return out


def fit_standardizer(m: FeatureMatrix) -> Standardizer:
    """
    Fit a standardizer on a feature matrix.

    Args:
        m: Matrix with at least 2 rows

    Returns:
        Standardizer holding column means and population standard deviations;
        columns whose values are all identical get a standard deviation of 0
    """
    if m.n_rows < 2:
        raise FeatureError(f"standardizer needs at least 2 rows, got {m.n_rows}")

    mean = m.rows.mean(axis=0)
    constant = np.ptp(m.rows, axis=0) == 0
    stddev = np.where(constant, 0.0, m.rows.std(axis=0))
    mean = np.where(constant, m.rows[0], mean)

    if constant.any():
        names = [n for n, c in zip(m.feature_names, constant) if c]
        logger.warning(f"Constant features will standardize to zero: {names}")
    return Standardizer(m.feature_names, mean, stddev)


def standardize(s: Standardizer, m: FeatureMatrix) -> FeatureMatrix:
    """
    Apply a fitted standardizer.

    Raises:
        FeatureError: If the matrix columns differ from the standardizer's
    """
    if tuple(m.feature_names) != tuple(s.feature_names):
        raise FeatureError(
            f"feature names {list(m.feature_names)} do not match standardizer "
            f"{list(s.feature_names)}"
        )
    return FeatureMatrix(m.feature_names, s.transform_rows(m.rows), m.labels)


def standardize_row(s: Standardizer, row: Sequence[float]) -> np.ndarray:
    """Standardize one raw row given in the standardizer's feature order."""
    row = np.asarray(row, dtype=np.float64)
    if row.shape != (len(s.feature_names),):
        raise FeatureError(
            f"row has {row.size} values, standardizer expects {len(s.feature_names)}"
        )
    return s.transform_rows(row)
