"""
k-Nearest Neighbors classifier over standardized feature matrices.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.tsentinel.config import DEFAULT_K
from src.tsentinel.errors import ModelError
from src.tsentinel.telemetry.matrix import FeatureMatrix
from src.tsentinel.telemetry.models import Label

logger = logging.getLogger("tsentinel.classifiers.knn")


@dataclass(frozen=True)
class KnnModel:
    """Stored training rows and labels; Euclidean distance, odd k."""

    feature_names: Tuple[str, ...]
    rows: np.ndarray
    labels: Tuple[Label, ...]
    k: int

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] != len(self.labels):
            raise ModelError("kNN training rows and labels do not line up")
        if not np.all(np.isfinite(rows)):
            raise ModelError("kNN training matrix contains non-finite values")
        if self.k < 1 or self.k % 2 == 0:
            raise ModelError(f"k must be odd and positive, got {self.k}")
        if self.k > rows.shape[0]:
            raise ModelError(f"k={self.k} exceeds the {rows.shape[0]} training rows")
        rows.flags.writeable = False
        attack = np.array([label is Label.ATTACK for label in self.labels], dtype=np.int64)
        attack.flags.writeable = False
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", tuple(Label(l) for l in self.labels))
        object.__setattr__(self, "_attack", attack)

    @property
    def n_features(self) -> int:
        return self.rows.shape[1]


def knn_fit(m: FeatureMatrix, k: int = DEFAULT_K) -> KnnModel:
    """
    Store a labeled matrix as a kNN model.

    Raises:
        ModelError: For an unlabeled matrix or a k that is even, < 1 or > n
    """
    if not m.is_labeled:
        raise ModelError("kNN training requires a labeled matrix")
    if k % 2 == 0:
        raise ModelError(f"k must be odd, got {k}")
    model = KnnModel(m.feature_names, m.rows, m.labels, k)
    logger.info(f"Fitted kNN with k={k} on {m.n_rows} rows")
    return model


def nearest_indices(model: KnnModel, x: np.ndarray) -> np.ndarray:
    """
    Indices of the k training rows closest to x.

    Equal distances keep training-row order, so ties at the k-th distance go
    to the lowest indices.
    """
    distances = np.sqrt(np.sum((model.rows - x) ** 2, axis=1))
    return np.argsort(distances, kind="stable")[: model.k]


def knn_predict(model: KnnModel, x: Sequence[float]) -> Label:
    """
    Majority label among the k nearest training rows.

    Raises:
        ModelError: If x does not have the model's dimension
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ModelError(
            f"query has {x.size} features, kNN model expects {model.n_features}"
        )
    votes = int(model._attack[nearest_indices(model, x)].sum())
    return Label.from_flag(2 * votes > model.k)


def knn_predict_many(model: KnnModel, rows: np.ndarray) -> List[Label]:
    """Predict every row of a 2-D array."""
    return [knn_predict(model, row) for row in np.asarray(rows, dtype=np.float64)]
