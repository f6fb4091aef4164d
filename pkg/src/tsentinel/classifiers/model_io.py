"""
Model bundle files: everything `detect` needs to replay a trace.

A bundle holds the feature names, the standardizer fitted on the training
data and one or both trained classifiers. The kNN model is stored as its
training CSV (standardized rows plus label) and k; the CART model as a
nested tree of nodes.
"""

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from src.tsentinel.classifiers.cart import (
    CartInternal,
    CartLeaf,
    CartModel,
    CartNode,
    CartParams,
)
from src.tsentinel.classifiers.knn import KnnModel
from src.tsentinel.errors import ModelError, TsentinelError
from src.tsentinel.features.serialization import (
    StandardizerDocument,
    standardizer_from_document,
    standardizer_to_document,
)
from src.tsentinel.features.standardizer import Standardizer
from src.tsentinel.telemetry.models import Label

logger = logging.getLogger("tsentinel.classifiers.model_io")

BUNDLE_FORMAT_VERSION = 1


class CartNodeDocument(BaseModel):
    """Internal nodes set feature_index/threshold/left/right; leaves set label/class_counts."""

    feature_index: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["CartNodeDocument"] = None
    right: Optional["CartNodeDocument"] = None
    label: Optional[Label] = None
    class_counts: Optional[Tuple[int, int]] = Field(
        default=None, description="(n_benign, n_attack)"
    )


class CartDocument(BaseModel):
    params: CartParams
    root: CartNodeDocument


class KnnDocument(BaseModel):
    k: int
    training_csv: str = Field(..., description="Standardized training rows with a label column")


class ModelBundleDocument(BaseModel):
    format_version: int = BUNDLE_FORMAT_VERSION
    feature_names: List[str]
    standardizer: StandardizerDocument
    knn: Optional[KnnDocument] = None
    cart: Optional[CartDocument] = None


@dataclass
class ModelBundle:
    """A loaded bundle: standardizer plus trained models keyed by algorithm name."""

    feature_names: Tuple[str, ...]
    standardizer: Standardizer
    models: Dict[str, Union[KnnModel, CartModel]] = field(default_factory=dict)


def _node_to_document(node: CartNode) -> CartNodeDocument:
    if isinstance(node, CartLeaf):
        return CartNodeDocument(label=node.label, class_counts=node.class_counts)
    return CartNodeDocument(
        feature_index=node.feature_index,
        threshold=node.threshold,
        left=_node_to_document(node.left),
        right=_node_to_document(node.right),
    )


def _node_from_document(doc: CartNodeDocument) -> CartNode:
    if doc.left is None and doc.right is None:
        if doc.label is None or doc.class_counts is None:
            raise ModelError("CART leaf is missing its label or class counts")
        return CartLeaf(doc.label, tuple(doc.class_counts))
    if None in (doc.left, doc.right, doc.feature_index, doc.threshold):
        raise ModelError("CART internal node is incomplete")
    return CartInternal(
        doc.feature_index,
        doc.threshold,
        _node_from_document(doc.left),
        _node_from_document(doc.right),
    )


def knn_training_csv(model: KnnModel) -> str:
    """The kNN training set as CSV: one column per feature plus label."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(model.feature_names) + ["label"])
    for row, label in zip(model.rows, model.labels):
        writer.writerow([repr(float(v)) for v in row] + [label.value])
    return buffer.getvalue()


def knn_from_training_csv(text: str, k: int) -> KnnModel:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if not header or header[-1] != "label":
        raise ModelError("kNN training CSV must end with a label column")
    rows, labels = [], []
    for cells in reader:
        if not cells:
            continue
        try:
            rows.append([float(v) for v in cells[:-1]])
            labels.append(Label(cells[-1]))
        except ValueError as e:
            raise ModelError(f"bad kNN training row {len(rows) + 1}: {e}") from None
    array = np.array(rows, dtype=np.float64).reshape(len(rows), len(header) - 1)
    return KnnModel(tuple(header[:-1]), array, tuple(labels), k)


def save_model_bundle(bundle: ModelBundle, path: Union[str, Path]) -> Path:
    """
    Write a model bundle as JSON.

    Returns:
        Path of the written file
    """
    document = ModelBundleDocument(
        feature_names=list(bundle.feature_names),
        standardizer=standardizer_to_document(bundle.standardizer),
    )
    for name, model in bundle.models.items():
        if isinstance(model, KnnModel):
            document.knn = KnnDocument(k=model.k, training_csv=knn_training_csv(model))
        elif isinstance(model, CartModel):
            document.cart = CartDocument(
                params=model.params, root=_node_to_document(model.root)
            )
        else:
            raise ModelError(f"cannot serialize model {name!r} of type {type(model)}")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(document.model_dump_json(indent=2))
    logger.info(f"Saved model bundle ({', '.join(bundle.models)}) to {path}")
    return path


def load_model_bundle(path: Union[str, Path]) -> ModelBundle:
    """
    Read a model bundle written by save_model_bundle.

    Raises:
        ModelError: If the file is not a valid bundle
    """
    path = Path(path)
    try:
        document = ModelBundleDocument.model_validate_json(path.read_text())
    except ValidationError as e:
        raise ModelError(f"invalid model bundle {path}: {e}") from None
    if document.format_version != BUNDLE_FORMAT_VERSION:
        raise ModelError(f"unsupported bundle format version {document.format_version}")

    feature_names = tuple(document.feature_names)
    try:
        standardizer = standardizer_from_document(document.standardizer)
    except TsentinelError as e:
        raise ModelError(f"invalid standardizer in {path}: {e}") from None

    models: Dict[str, Union[KnnModel, CartModel]] = {}
    if document.knn is not None:
        models["knn"] = knn_from_training_csv(document.knn.training_csv, document.knn.k)
    if document.cart is not None:
        models["cart"] = CartModel(
            feature_names, _node_from_document(document.cart.root), document.cart.params
        )
    for name, model in models.items():
        if tuple(model.feature_names) != feature_names:
            raise ModelError(f"{name} model features do not match the bundle")
    logger.info(f"Loaded model bundle ({', '.join(models)}) from {path}")
    return ModelBundle(feature_names, standardizer, models)
