"""
JSON documents for fitted standardizers and PCA models.
"""

from pathlib import Path
from typing import List, Literal, Union

from pydantic import BaseModel, Field, ValidationError

from src.tsentinel.errors import FeatureError
from src.tsentinel.features.pca import PcaModel
from src.tsentinel.features.standardizer import Standardizer


class StandardizerDocument(BaseModel):
    """Serialized Standardizer."""

    feature_names: List[str]
    mean: List[float]
    stddev: List[float] = Field(..., description="Population standard deviation; 0 marks a constant feature")


class PcaDocument(BaseModel):
    """Serialized PcaModel."""

    feature_names: List[str]
    covariance: Literal["population"] = "population"
    mean: List[float]
    components: List[List[float]] = Field(..., description="One row per component, largest eigenvalue first")
    eigenvalues: List[float]


class PcaBundle(BaseModel):
    """File layout written by save_pca_json."""

    standardizer: StandardizerDocument
    pca: PcaDocument


def standardizer_to_document(s: Standardizer) -> StandardizerDocument:
    return StandardizerDocument(
        feature_names=list(s.feature_names),
        mean=s.mean.tolist(),
        stddev=s.stddev.tolist(),
    )


def standardizer_from_document(doc: StandardizerDocument) -> Standardizer:
    return Standardizer(tuple(doc.feature_names), doc.mean, doc.stddev)


def pca_to_document(p: PcaModel) -> PcaDocument:
    return PcaDocument(
        feature_names=list(p.feature_names),
        mean=p.mean.tolist(),
        components=p.components.tolist(),
        eigenvalues=p.eigenvalues.tolist(),
    )


def pca_from_document(doc: PcaDocument) -> PcaModel:
    return PcaModel(tuple(doc.feature_names), doc.mean, doc.components, doc.eigenvalues)


def save_pca_json(p: PcaModel, s: Standardizer, path: Union[str, Path]) -> Path:
    """
    Write a fitted PCA model together with the standardizer applied before it.

    Returns:
        Path of the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = PcaBundle(
        standardizer=standardizer_to_document(s), pca=pca_to_document(p)
    )
    path.write_text(document.model_dump_json(indent=2))
    return path


def load_pca_json(path: Union[str, Path]):
    """
    Read a file written by save_pca_json.

    Returns:
        Tuple of (PcaModel, Standardizer)
    """
    try:
        document = PcaBundle.model_validate_json(Path(path).read_text())
    except ValidationError as e:
        raise FeatureError(f"invalid PCA file {path}: {e}") from None
    return pca_from_document(document.pca), standardizer_from_document(document.standardizer)
