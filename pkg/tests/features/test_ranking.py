import numpy as np
import pytest

from src.tsentinel.config import METRIC_NAMES, DEFAULT_FEATURES
from src.tsentinel.errors import FeatureError
from src.tsentinel.features import (
    PcaModel,
    analyze_features,
    choose_features,
    fit_pca,
    rank_features,
    select_features,
)
from src.tsentinel.features.ranking import components_for_threshold
from src.tsentinel.telemetry import FeatureMatrix, to_feature_matrix
from tests.conftest import make_trace, training_trace


def axis_model():
    return PcaModel(("cpu_util", "mem_used"), np.zeros(2), np.eye(2), np.array([2.0, 1.0]))


def test_axis_aligned_threshold_0_7():
    # ratios [2/3, 1/3]: the first component alone covers 0.667 < 0.7, so two are used
    ranking = rank_features(axis_model(), 0.7)
    assert ranking.components_used == 2
    assert ranking.names == ["cpu_util", "mem_used"]
    assert ranking.score("cpu_util") == pytest.approx(2 / 3)
    assert ranking.score("mem_used") == pytest.approx(1 / 3)


def test_axis_aligned_threshold_0_6_uses_one_component():
    ranking = rank_features(axis_model(), 0.6)
    assert ranking.components_used == 1
    assert ranking.entries == (("cpu_util", pytest.approx(2 / 3)), ("mem_used", 0.0))


def test_full_threshold_uses_every_component():
    rng = np.random.default_rng(1)
    p = fit_pca(FeatureMatrix(METRIC_NAMES, rng.normal(size=(50, 8))))
    ranking = rank_features(p, 1.0)
    assert ranking.components_used == 8
    assert sorted(ranking.names) == sorted(METRIC_NAMES)


def test_ties_follow_canonical_order():
    names = ("net_pkts_out", "cpu_util", "disk_read_reqs")
    p = PcaModel(names, np.zeros(3), np.eye(3), np.array([1.0, 1.0, 1.0]))
    assert rank_features(p, 1.0).names == ["cpu_util", "disk_read_reqs", "net_pkts_out"]


def test_invalid_threshold():
    with pytest.raises(FeatureError):
        rank_features(axis_model(), 0.0)


def test_components_for_threshold():
    ratios = np.array([0.5, 0.3, 0.2])
    assert components_for_threshold(ratios, 0.5) == 1
    assert components_for_threshold(ratios, 0.8) == 2
    assert components_for_threshold(ratios, 1.0) == 3


def test_row_permutation_invariance():
    rng = np.random.default_rng(3)
    rows = rng.normal(size=(40, 8)) @ rng.normal(size=(8, 8))
    a = rank_features(fit_pca(FeatureMatrix(METRIC_NAMES, rows)), 0.95)
    b = rank_features(fit_pca(FeatureMatrix(METRIC_NAMES, rows[rng.permutation(40)])), 0.95)
    assert a.names == b.names
    for (_, x), (_, y) in zip(a.entries, b.entries):
        assert x == pytest.approx(y, abs=1e-12)


def test_select_default_six_features(small_trace):
    m = to_feature_matrix(small_trace, METRIC_NAMES)
    selected = select_features(m, DEFAULT_FEATURES)
    assert selected.feature_names == DEFAULT_FEATURES
    assert selected.rows[:, 1].tolist() == m.rows[:, 3].tolist()
    assert selected.labels == m.labels


def test_select_identity(small_trace):
    m = to_feature_matrix(small_trace, METRIC_NAMES)
    assert np.array_equal(select_features(m, METRIC_NAMES).rows, m.rows)


def test_select_errors(small_trace):
    m = to_feature_matrix(small_trace, DEFAULT_FEATURES)
    with pytest.raises(FeatureError):
        select_features(m, [])
    with pytest.raises(FeatureError, match="unknown feature"):
        select_features(m, ["mem_used"])


def test_choose_features():
    ranking = rank_features(axis_model(), 1.0)
    assert choose_features(ranking, 1) == ["cpu_util"]
    assert choose_features(ranking, 6) == ["cpu_util", "mem_used"]
    with pytest.raises(FeatureError):
        choose_features(ranking, 0)


def test_synthetic_data_ranks_packets_above_disk_reads():
    analysis = analyze_features(training_trace(0), 0.95)
    names = analysis.ranking.names
    assert names.index("net_pkts_in") < names.index("disk_read_reqs")
    assert len(analysis.chosen) == 6


def test_constant_trace_has_zero_variance():
    trace = make_trace(np.tile([5.0, 0.2, 1, 1, 100, 100, 10, 10], (4, 1)))
    with pytest.raises(FeatureError, match="zero total variance"):
        analyze_features(trace)
