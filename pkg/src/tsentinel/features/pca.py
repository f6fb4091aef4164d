"""
Principal Component Analysis over (standardized) feature matrices.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.tsentinel.errors import ConvergenceError, FeatureError
from src.tsentinel.telemetry.matrix import FeatureMatrix, check_feature_names

logger = logging.getLogger("tsentinel.features.pca")

# Negative eigenvalues down to this (relative) size are rounding noise
EIGENVALUE_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class PcaModel:
    """
    Mean vector, component loadings and eigenvalues.

    components[k] is the k-th principal direction (one row per component),
    ordered by eigenvalue, largest first. In every row the loading of
    largest magnitude is positive.
    """

    feature_names: Tuple[str, ...]
    mean: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self):
        names = check_feature_names(self.feature_names)
        d = len(names)
        mean = np.array(self.mean, dtype=np.float64)
        components = np.array(self.components, dtype=np.float64)
        eigenvalues = np.array(self.eigenvalues, dtype=np.float64)
        if mean.shape != (d,) or components.shape != (d, d) or eigenvalues.shape != (d,):
            raise FeatureError(f"PCA model arrays do not match {d} features")
        for array in (mean, components, eigenvalues):
            array.flags.writeable = False
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "eigenvalues", eigenvalues)


def covariance(rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Column means and population (1/n) covariance matrix."""
    mean = rows.mean(axis=0)
    centered = rows - mean
    return mean, centered.T @ centered / rows.shape[0]


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude loading is positive (first index wins ties)."""
    pivots = np.argmax(np.abs(components), axis=1)
    signs = np.sign(components[np.arange(components.shape[0]), pivots])
    signs[signs == 0] = 1.0
    return components * signs[:, None]


def fit_pca(m: FeatureMatrix) -> PcaModel:
    """
    Fit a PCA model by eigen-decomposition of the covariance matrix.

    The input is expected to be standardized; this is not enforced. The
    symmetric solver is LAPACK's syevd through numpy.linalg.eigh.

    Args:
        m: Matrix with at least 2 rows

    Returns:
        PcaModel with components sorted by eigenvalue, largest first

    Raises:
        FeatureError: With fewer than 2 rows
        ConvergenceError: If the eigen-solver does not converge
    """
    if m.n_rows < 2:
        raise FeatureError(f"PCA needs at least 2 rows, got {m.n_rows}")

    mean, cov = covariance(m.rows)
    try:
        eigenvalues, vectors = np.linalg.eigh(cov)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"eigen-decomposition did not converge: {e}") from None

    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    components = _fix_signs(vectors[:, order].T)

    scale = max(1.0, float(np.trace(cov)))
    if eigenvalues.min() < -EIGENVALUE_CLAMP_TOL * scale:
        logger.warning(f"Clamping negative eigenvalue {eigenvalues.min():.3e} to 0")
    eigenvalues = np.clip(eigenvalues, 0.0, None)

    logger.info(
        f"Fitted PCA on {m.n_rows}x{m.n_features} matrix, "
        f"eigenvalues {np.round(eigenvalues, 4).tolist()}"
    )
    return PcaModel(m.feature_names, mean, components, eigenvalues)


def explained_variance_ratio(p: PcaModel) -> np.ndarray:
    """
    Share of total variance carried by each component.

    Raises:
        FeatureError: If every eigenvalue is zero (all-constant data)
    """
    total = float(np.sum(p.eigenvalues))
    if total <= 0:
        raise FeatureError("zero total variance: every feature is constant")
    return p.eigenvalues / total


def project(p: PcaModel, m: FeatureMatrix) -> np.ndarray:
    """Scores of each row on every principal component."""
    if tuple(m.feature_names) != p.feature_names:
        raise FeatureError("feature names do not match the PCA model")
    return (m.rows - p.mean) @ p.components.T


def reconstruct(p: PcaModel, scores: np.ndarray) -> np.ndarray:
    """Map component scores back to feature space (inverse of project)."""
    return np.asarray(scores, dtype=np.float64) @ p.components + p.mean
