"""
CART decision tree with Gini impurity, grown greedily without pruning.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.tsentinel.config import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MIN_GAIN,
    DEFAULT_MIN_SAMPLES_SPLIT,
)
from src.tsentinel.errors import ModelError
from src.tsentinel.telemetry.matrix import FeatureMatrix
from src.tsentinel.telemetry.models import Label

logger = logging.getLogger("tsentinel.classifiers.cart")

# Gains this close to min_gain count as "no improvement" (float rounding)
GAIN_TOL = 1e-12


class CartParams(BaseModel):
    """Growth limits; max_depth None grows until leaves are pure."""

    model_config = ConfigDict(frozen=True)

    max_depth: Optional[int] = Field(default=DEFAULT_MAX_DEPTH, ge=0)
    min_samples_split: int = Field(default=DEFAULT_MIN_SAMPLES_SPLIT, ge=1)
    min_gain: float = Field(default=DEFAULT_MIN_GAIN, ge=0)


@dataclass(frozen=True)
class CartLeaf:
    label: Label
    class_counts: Tuple[int, int]  # (n_benign, n_attack)


@dataclass(frozen=True)
class CartInternal:
    feature_index: int
    threshold: float
    left: "CartNode"
    right: "CartNode"


CartNode = Union[CartLeaf, CartInternal]


@dataclass(frozen=True)
class CartModel:
    feature_names: Tuple[str, ...]
    root: CartNode
    params: CartParams

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def depth(self) -> int:
        return tree_depth(self.root)


def tree_depth(node: CartNode) -> int:
    if isinstance(node, CartLeaf):
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def gini(n_attack, n):
    """Gini impurity 1 - p_benign^2 - p_attack^2 from counts (array-friendly)."""
    p_attack = n_attack / n
    return 1.0 - p_attack**2 - (1.0 - p_attack) ** 2


def make_leaf(n_benign: int, n_attack: int) -> CartLeaf:
    """Leaf predicting the majority class; ties go to no_attack."""
    return CartLeaf(Label.from_flag(n_attack > n_benign), (n_benign, n_attack))


@dataclass(frozen=True)
class Split:
    gain: float
    feature_index: int
    threshold: float


def best_split(X: np.ndarray, y: np.ndarray) -> Optional[Split]:
    """
    Highest-gain split of a node.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values of each feature. Equal gains keep the lower feature index, then
    the lower threshold.

    Args:
        X: Node rows (n x d)
        y: 0/1 attack flags for the rows

    Returns:
        The best Split, or None if no feature has two distinct values
    """
    n = X.shape[0]
    n_attack = int(y.sum())
    parent = gini(n_attack, n)
    left_n = np.arange(1, n)
    right_n = n - left_n

    best = None
    for feature in range(X.shape[1]):
        order = np.argsort(X[:, feature], kind="stable")
        values = X[order, feature]
        distinct = values[1:] > values[:-1]
        if not distinct.any():
            continue

        left_attack = np.cumsum(y[order])[:-1]
        right_attack = n_attack - left_attack
        weighted = (
            left_n * gini(left_attack, left_n) + right_n * gini(right_attack, right_n)
        ) / n
        gains = np.where(distinct, parent - weighted, -np.inf)

        position = int(np.argmax(gains))
        if best is None or gains[position] > best.gain:
            threshold = (values[position] + values[position + 1]) / 2.0
            best = Split(float(gains[position]), feature, float(threshold))
    return best


def _grow(X: np.ndarray, y: np.ndarray, depth: int, params: CartParams) -> CartNode:
    n = X.shape[0]
    n_attack = int(y.sum())
    leaf = make_leaf(n - n_attack, n_attack)

    if n_attack == 0 or n_attack == n:
        return leaf
    if params.max_depth is not None and depth >= params.max_depth:
        return leaf
    if n < params.min_samples_split:
        return leaf

    split = best_split(X, y)
    if split is None or split.gain <= params.min_gain + GAIN_TOL:
        return leaf

    goes_left = X[:, split.feature_index] <= split.threshold
    return CartInternal(
        split.feature_index,
        split.threshold,
        _grow(X[goes_left], y[goes_left], depth + 1, params),
        _grow(X[~goes_left], y[~goes_left], depth + 1, params),
    )


def cart_fit(m: FeatureMatrix, params: Optional[CartParams] = None) -> CartModel:
    """
    Grow a CART tree on a labeled matrix.

    Raises:
        ModelError: For an unlabeled or empty matrix
    """
    params = params or CartParams()
    if not m.is_labeled:
        raise ModelError("CART training requires a labeled matrix")
    if m.n_rows < 1:
        raise ModelError("CART training requires at least one row")

    root = _grow(m.rows, m.attack_flags(), 0, params)
    model = CartModel(m.feature_names, root, params)
    logger.info(f"Fitted CART on {m.n_rows} rows, depth {model.depth}")
    return model


def cart_predict(model: CartModel, x: Sequence[float]) -> Label:
    """
    Route x to a leaf and return its label.

    Raises:
        ModelError: If x does not have the model's dimension
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ModelError(
            f"query has {x.size} features, CART model expects {model.n_features}"
        )
    node = model.root
    while isinstance(node, CartInternal):
        node = node.left if x[node.feature_index] <= node.threshold else node.right
    return node.label


def cart_predict_many(model: CartModel, rows: np.ndarray) -> List[Label]:
    """Predict every row of a 2-D array."""
    return [cart_predict(model, row) for row in np.asarray(rows, dtype=np.float64)]
