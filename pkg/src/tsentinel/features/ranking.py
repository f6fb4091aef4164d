"""
PCA-based feature relevance ranking and feature subset selection.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.tsentinel.config import DEFAULT_TOP_FEATURES, METRIC_NAMES
from src.tsentinel.errors import FeatureError
from src.tsentinel.features.pca import PcaModel, explained_variance_ratio
from src.tsentinel.telemetry.matrix import FeatureMatrix, check_feature_names

logger = logging.getLogger("tsentinel.features.ranking")

# Slack when comparing a cumulative ratio sum against the threshold
CUMULATIVE_TOL = 1e-12


@dataclass(frozen=True)
class FeatureRanking:
    """Features ordered by relevance score, most relevant first."""

    entries: Tuple[Tuple[str, float], ...]
    components_used: int
    variance_threshold: float

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.entries]

    def score(self, name: str) -> float:
        return dict(self.entries)[name]


def components_for_threshold(ratios: np.ndarray, variance_threshold: float) -> int:
    """Smallest number of leading components whose ratios reach the threshold."""
    cumulative = np.cumsum(ratios)
    reached = np.nonzero(cumulative >= variance_threshold - CUMULATIVE_TOL)[0]
    return int(reached[0]) + 1 if reached.size else len(ratios)


def rank_features(p: PcaModel, variance_threshold: float) -> FeatureRanking:
    """
    Rank features by their variance-weighted loadings.

    With K the number of leading components needed to explain at least
    variance_threshold of the variance, feature j scores
    sum over k < K of ratio_k * |loading_kj|. Equal scores keep the
    canonical metric order.

    Args:
        p: Fitted PCA model
        variance_threshold: Fraction in (0, 1]

    Returns:
        FeatureRanking containing every model feature exactly once
    """
    if not 0 < variance_threshold <= 1:
        raise FeatureError(f"variance threshold must be in (0, 1], got {variance_threshold}")

    ratios = explained_variance_ratio(p)
    k = components_for_threshold(ratios, variance_threshold)
    scores = ratios[:k] @ np.abs(p.components[:k])

    order = sorted(
        range(len(p.feature_names)),
        key=lambda j: (-scores[j], METRIC_NAMES.index(p.feature_names[j])),
    )
    entries = tuple((p.feature_names[j], float(scores[j])) for j in order)
    logger.info(f"Ranked features using {k} component(s): {[n for n, _ in entries]}")
    return FeatureRanking(entries, k, variance_threshold)


def choose_features(
    ranking: FeatureRanking, top_n: int = DEFAULT_TOP_FEATURES
) -> List[str]:
    """The top_n highest-ranked feature names (all of them if fewer)."""
    if top_n < 1:
        raise FeatureError(f"top_n must be >= 1, got {top_n}")
    return ranking.names[:top_n]


def select_features(m: FeatureMatrix, names: Sequence[str]) -> FeatureMatrix:
    """
    Project a matrix onto a subset of its columns.

    Args:
        m: Source matrix
        names: Columns to keep, in output order

    Returns:
        FeatureMatrix with the same rows and labels

    Raises:
        FeatureError: On an empty list or a name missing from m
    """
    names = check_feature_names(names)
    missing = [name for name in names if name not in m.feature_names]
    if missing:
        raise FeatureError(f"unknown feature(s) for this matrix: {missing}")
    columns = [m.feature_names.index(name) for name in names]
    return FeatureMatrix(names, m.rows[:, columns], m.labels)
