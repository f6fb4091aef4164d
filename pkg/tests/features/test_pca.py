import numpy as np
import pytest

from src.tsentinel.config import METRIC_NAMES
from src.tsentinel.errors import FeatureError
from src.tsentinel.features import (
    PcaModel,
    explained_variance_ratio,
    fit_pca,
    fit_standardizer,
    project,
    reconstruct,
    standardize,
)
from src.tsentinel.features.pca import covariance
from src.tsentinel.telemetry import FeatureMatrix

NAMES_2D = ("cpu_util", "mem_used")
NAMES_6D = METRIC_NAMES[:6]


def axis_aligned_matrix():
    # population covariance exactly [[2, 0], [0, 1]]
    s2 = np.sqrt(2.0)
    rows = [[s2, 1.0], [s2, -1.0], [-s2, 1.0], [-s2, -1.0]]
    return FeatureMatrix(NAMES_2D, np.array(rows))


def test_axis_aligned_case():
    p = fit_pca(axis_aligned_matrix())
    assert p.eigenvalues == pytest.approx([2.0, 1.0], abs=1e-9)
    assert np.allclose(p.components, np.eye(2), atol=1e-9)


def test_line_y_equals_x():
    values = np.arange(10, dtype=float)
    p = fit_pca(FeatureMatrix(NAMES_2D, np.column_stack([values, values])))
    total = 2 * values.var()
    assert p.eigenvalues[0] == pytest.approx(total, abs=1e-9)
    assert p.eigenvalues[1] == pytest.approx(0.0, abs=1e-9)
    assert np.allclose(p.components[0], [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-9)


def test_sign_convention():
    rows = np.array([[1.0, -2.0], [2.0, -4.1], [3.0, -5.9], [0.0, 0.2]])
    p = fit_pca(FeatureMatrix(NAMES_2D, rows))
    for component in p.components:
        assert component[np.argmax(np.abs(component))] > 0


@pytest.mark.parametrize("seed", range(20))
def test_random_matrices_match_dense_solver(seed):
    rng = np.random.default_rng(seed)
    rows = rng.normal(size=(40, 6)) @ rng.normal(size=(6, 6))
    m = FeatureMatrix(NAMES_6D, rows)
    p = fit_pca(m)
    _, cov = covariance(rows)

    assert np.allclose(p.components @ p.components.T, np.eye(6), atol=1e-9)
    assert np.sum(p.eigenvalues) == pytest.approx(np.trace(cov), rel=1e-9)
    assert np.all(np.diff(p.eigenvalues) <= 1e-12)
    assert np.all(p.eigenvalues >= 0)

    oracle = np.sort(np.linalg.eig(cov)[0].real)[::-1]
    assert p.eigenvalues == pytest.approx(oracle, abs=1e-9 * max(1.0, oracle[0]))

    centered = rows - rows.mean(axis=0)
    assert np.allclose(reconstruct(p, project(p, m)) - p.mean, centered, atol=1e-8)


def test_explained_variance_ratio_examples():
    def model(eigenvalues):
        d = len(eigenvalues)
        return PcaModel(METRIC_NAMES[:d], np.zeros(d), np.eye(d), eigenvalues)

    assert explained_variance_ratio(model([3.0, 1.0])).tolist() == [0.75, 0.25]
    assert explained_variance_ratio(model([5.0, 0.0, 0.0])).tolist() == [1.0, 0.0, 0.0]
    with pytest.raises(FeatureError, match="zero total variance"):
        explained_variance_ratio(model([0.0, 0.0]))


def test_ratios_sum_to_one():
    rng = np.random.default_rng(4)
    p = fit_pca(FeatureMatrix(NAMES_6D, rng.normal(size=(30, 6))))
    ratios = explained_variance_ratio(p)
    assert ratios.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(ratios) <= 0)


def test_needs_two_rows():
    with pytest.raises(FeatureError):
        fit_pca(FeatureMatrix(NAMES_2D, np.array([[1.0, 2.0]])))


def test_scale_invariance_after_standardizing():
    rng = np.random.default_rng(9)
    rows = rng.normal(size=(50, 6)) @ rng.normal(size=(6, 6))
    scaled = rows.copy()
    scaled[:, 2] *= 1e6

    def eigenvalues(data):
        m = FeatureMatrix(NAMES_6D, data)
        return fit_pca(standardize(fit_standardizer(m), m)).eigenvalues

    assert eigenvalues(scaled) == pytest.approx(eigenvalues(rows), abs=1e-9)


def test_fit_is_deterministic():
    rng = np.random.default_rng(2)
    m = FeatureMatrix(NAMES_6D, rng.normal(size=(25, 6)))
    a, b = fit_pca(m), fit_pca(m)
    assert np.array_equal(a.components, b.components)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
