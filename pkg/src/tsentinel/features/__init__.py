"""
Standardization, PCA and PCA-based feature selection.
"""

from src.tsentinel.features.analysis import FeatureAnalysis, analyze_features
from src.tsentinel.features.pca import (
    PcaModel,
    explained_variance_ratio,
    fit_pca,
    project,
    reconstruct,
)
from src.tsentinel.features.ranking import (
    FeatureRanking,
    choose_features,
    rank_features,
    select_features,
)
from src.tsentinel.features.standardizer import (
    Standardizer,
    fit_standardizer,
    standardize,
    standardize_row,
)

__all__ = [
    "FeatureAnalysis",
    "FeatureRanking",
    "PcaModel",
    "Standardizer",
    "analyze_features",
    "choose_features",
    "explained_variance_ratio",
    "fit_pca",
    "fit_standardizer",
    "project",
    "rank_features",
    "reconstruct",
    "select_features",
    "standardize",
    "standardize_row",
]
