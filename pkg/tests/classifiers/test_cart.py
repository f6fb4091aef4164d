import itertools

import numpy as np
import pytest

from src.tsentinel.config import METRIC_NAMES
from src.tsentinel.errors import ModelError
from src.tsentinel.classifiers import (
    CartInternal,
    CartLeaf,
    CartParams,
    cart_fit,
    cart_predict,
    cart_predict_many,
)
from src.tsentinel.classifiers.cart import gini
from src.tsentinel.telemetry import FeatureMatrix, Label

NAMES_6D = METRIC_NAMES[:6]


def labeled(rows, flags):
    rows = np.asarray(rows, dtype=float)
    return FeatureMatrix(
        METRIC_NAMES[: rows.shape[1]], rows, tuple(Label.from_flag(f) for f in flags)
    )


def consistent_dataset(seed):
    """50 distinct rows, labels from an arbitrary rule, so no duplicate row has two labels."""
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, 8, size=(50, 6)).astype(float) + rng.normal(scale=1e-3, size=(50, 6))
    flags = rng.integers(0, 2, size=50)
    return rows, flags


def single_split_search(rows, flags):
    """
    Exhaustive search over every (feature, midpoint) split.

    Returns the largest weighted-Gini gain and the set of training accuracies
    reached by splits within rounding of that gain (majority label per side).
    """
    n = len(flags)
    parent = gini(flags.sum(), n)
    candidates = []
    for feature in range(rows.shape[1]):
        values = np.unique(rows[:, feature])
        for low, high in zip(values[:-1], values[1:]):
            left = rows[:, feature] <= (low + high) / 2
            nl, nr = int(left.sum()), int(n - left.sum())
            al, ar = int(flags[left].sum()), int(flags[~left].sum())
            gain = parent - (nl * gini(al, nl) + nr * gini(ar, nr)) / n
            correct = max(al, nl - al) + max(ar, nr - ar)
            candidates.append((gain, correct / n))
    best_gain = max(gain for gain, _ in candidates)
    accuracies = {acc for gain, acc in candidates if gain >= best_gain - 1e-9}
    return best_gain, accuracies


def test_gini_values():
    assert gini(0, 4) == 0.0
    assert gini(2, 4) == pytest.approx(0.5)
    assert gini(1, 4) == pytest.approx(0.375)


def test_pure_node_is_leaf():
    model = cart_fit(labeled([[1.0], [2.0]], [1, 1]))
    assert isinstance(model.root, CartLeaf)
    assert model.root.label is Label.ATTACK


def test_single_split_at_midpoint():
    model = cart_fit(labeled([[1.0], [2.0], [5.0], [6.0]], [0, 0, 1, 1]))
    assert isinstance(model.root, CartInternal)
    assert model.root.feature_index == 0
    assert model.root.threshold == 3.5
    assert cart_predict(model, [3.5]) is Label.BENIGN
    assert cart_predict(model, [3.6]) is Label.ATTACK


def test_equal_gain_prefers_lower_feature():
    rows = [[1.0, 1.0], [2.0, 2.0], [5.0, 5.0], [6.0, 6.0]]
    model = cart_fit(labeled(rows, [0, 0, 1, 1]))
    assert model.root.feature_index == 0


def test_leaf_tie_goes_to_benign():
    model = cart_fit(labeled([[1.0], [1.0]], [0, 1]))
    assert model.root == CartLeaf(Label.BENIGN, (1, 1))


@pytest.mark.parametrize("seed", range(100))
def test_consistent_data_is_fit_exactly(seed):
    rows, flags = consistent_dataset(seed)
    model = cart_fit(labeled(rows, flags), CartParams(max_depth=None))
    predicted = cart_predict_many(model, rows)
    assert predicted == [Label.from_flag(f) for f in flags]


@pytest.mark.parametrize("seed", range(100))
def test_depth_one_matches_best_single_split(seed):
    rows, flags = consistent_dataset(seed)
    model = cart_fit(labeled(rows, flags), CartParams(max_depth=1))
    assert model.depth == 1
    predicted = np.array([p is Label.ATTACK for p in cart_predict_many(model, rows)])
    accuracy = float(np.mean(predicted == flags.astype(bool)))
    _, accuracies = single_split_search(rows, flags)
    assert any(accuracy == pytest.approx(a) for a in accuracies)


def test_max_depth_zero_is_majority_leaf():
    model = cart_fit(labeled([[1.0], [2.0], [3.0]], [1, 1, 0]), CartParams(max_depth=0))
    assert model.root == CartLeaf(Label.ATTACK, (1, 2))


def test_min_samples_split():
    rows = [[1.0], [2.0], [3.0], [4.0]]
    model = cart_fit(labeled(rows, [0, 1, 0, 1]), CartParams(min_samples_split=5))
    assert isinstance(model.root, CartLeaf)


def test_zero_gain_feature_never_used():
    rng = np.random.default_rng(1)
    informative = rng.normal(size=30)
    flags = (informative > 0).astype(int)
    rows = np.column_stack([np.zeros(30), informative])
    model = cart_fit(labeled(rows, flags))
    nodes = [model.root]
    while nodes:
        node = nodes.pop()
        if isinstance(node, CartInternal):
            assert node.feature_index == 1
            nodes.extend([node.left, node.right])


def test_errors():
    with pytest.raises(ModelError):
        cart_fit(FeatureMatrix(("cpu_util",), np.zeros((2, 1))))
    model = cart_fit(labeled([[1.0], [2.0]], [0, 1]))
    with pytest.raises(ModelError):
        cart_predict(model, [1.0, 2.0])


def test_deterministic():
    rows, flags = consistent_dataset(3)
    a = cart_fit(labeled(rows, flags))
    b = cart_fit(labeled(rows, flags))
    assert a == b


def test_all_split_orders_agree_on_separable_data():
    rows = np.array(list(itertools.product([0.0, 1.0], repeat=3)))
    flags = rows[:, 2].astype(int)
    model = cart_fit(labeled(rows, flags))
    assert model.root.feature_index == 2
    assert model.depth == 1
