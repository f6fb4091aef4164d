"""
kNN and CART classifiers for attack / no_attack labeling.
"""

from typing import List, Union

import numpy as np

from src.tsentinel.classifiers.cart import (
    CartInternal,
    CartLeaf,
    CartModel,
    CartParams,
    cart_fit,
    cart_predict,
    cart_predict_many,
)
from src.tsentinel.classifiers.knn import KnnModel, knn_fit, knn_predict, knn_predict_many
from src.tsentinel.errors import ModelError
from src.tsentinel.telemetry.models import Label

__all__ = [
    "ALGORITHMS",
    "CartInternal",
    "CartLeaf",
    "CartModel",
    "CartParams",
    "KnnModel",
    "TrainedModel",
    "cart_fit",
    "cart_predict",
    "cart_predict_many",
    "get_algorithm_by_name",
    "knn_fit",
    "knn_predict",
    "knn_predict_many",
    "predict_rows",
]

TrainedModel = Union[KnnModel, CartModel]

# Dictionary of available classifiers
ALGORITHMS = {
    "knn": {
        "name": "k-Nearest Neighbors",
        "predict": knn_predict_many,
        "model_type": KnnModel,
        "id": "kNN",
    },
    "cart": {
        "name": "Decision tree (CART)",
        "predict": cart_predict_many,
        "model_type": CartModel,
        "id": "CART",
    },
}


def get_algorithm_by_name(algorithm_name):
    """
    Get a classifier by its name.

    Args:
        algorithm_name: Name/key of the classifier ("knn" or "cart")

    Returns:
        Tuple of (predict_function, algorithm_id) or (None, None) if not found
    """
    algorithm = ALGORITHMS.get(algorithm_name)
    if algorithm:
        return algorithm["predict"], algorithm["id"]
    return None, None


def predict_rows(model: TrainedModel, rows: np.ndarray) -> List[Label]:
    """Predict standardized rows with whichever classifier model is given."""
    for algorithm in ALGORITHMS.values():
        if isinstance(model, algorithm["model_type"]):
            return algorithm["predict"](model, rows)
    raise ModelError(f"unsupported model type {type(model).__name__}")
