"""
The full feature study of a trace: standardize all eight metrics, fit PCA,
rank the metrics and pick the automatic subset.
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from src.tsentinel.config import (
    DEFAULT_TOP_FEATURES,
    DEFAULT_VARIANCE_THRESHOLD,
    METRIC_NAMES,
)
from src.tsentinel.features.pca import PcaModel, explained_variance_ratio, fit_pca
from src.tsentinel.features.ranking import FeatureRanking, choose_features, rank_features
from src.tsentinel.features.standardizer import Standardizer, fit_standardizer, standardize
from src.tsentinel.telemetry.matrix import to_feature_matrix
from src.tsentinel.telemetry.models import TelemetryTrace

logger = logging.getLogger("tsentinel.features.analysis")


@dataclass(frozen=True)
class FeatureAnalysis:
    standardizer: Standardizer
    pca: PcaModel
    ratios: np.ndarray
    ranking: FeatureRanking
    chosen: List[str]


def analyze_features(
    trace: TelemetryTrace,
    variance_threshold: float = DEFAULT_VARIANCE_THRESHOLD,
    top_n: int = DEFAULT_TOP_FEATURES,
) -> FeatureAnalysis:
    """
    Run the PCA feature study on every canonical metric of a trace.

    Args:
        trace: Trace with at least 2 samples
        variance_threshold: Fraction of variance the scored components must cover
        top_n: Size of the automatic feature subset

    Returns:
        FeatureAnalysis with the fitted standardizer and PCA model, the
        explained-variance ratios, the ranking and the chosen subset

    Raises:
        FeatureError: For too few samples or all-constant data
    """
    matrix = to_feature_matrix(trace, METRIC_NAMES)
    standardizer = fit_standardizer(matrix)
    pca = fit_pca(standardize(standardizer, matrix))
    ratios = explained_variance_ratio(pca)
    ranking = rank_features(pca, variance_threshold)
    chosen = choose_features(ranking, top_n)
    logger.info(f"Automatic feature subset: {chosen}")
    return FeatureAnalysis(standardizer, pca, ratios, ranking, chosen)
