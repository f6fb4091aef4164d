import numpy as np
import pytest

from src.tsentinel.classifiers import (
    ALGORITHMS,
    CartParams,
    cart_fit,
    get_algorithm_by_name,
    knn_fit,
    predict_rows,
)
from src.tsentinel.classifiers.model_io import ModelBundle, load_model_bundle, save_model_bundle
from src.tsentinel.config import DEFAULT_FEATURES
from src.tsentinel.errors import ModelError
from src.tsentinel.features import fit_standardizer, standardize
from src.tsentinel.telemetry import to_feature_matrix
from tests.conftest import training_trace


@pytest.fixture(scope="module")
def trained():
    m = to_feature_matrix(training_trace(2), DEFAULT_FEATURES)
    s = fit_standardizer(m)
    z = standardize(s, m)
    return s, z, {"knn": knn_fit(z, 5), "cart": cart_fit(z, CartParams(max_depth=4))}


def test_registry():
    assert set(ALGORITHMS) == {"knn", "cart"}
    predict, algorithm_id = get_algorithm_by_name("cart")
    assert algorithm_id == "CART"
    assert get_algorithm_by_name("svm") == (None, None)


def test_bundle_round_trip(tmp_path, trained):
    s, z, models = trained
    path = save_model_bundle(ModelBundle(DEFAULT_FEATURES, s, models), tmp_path / "model.json")
    bundle = load_model_bundle(path)

    assert bundle.feature_names == DEFAULT_FEATURES
    assert np.array_equal(bundle.standardizer.mean, s.mean)
    assert bundle.models["cart"] == models["cart"]
    assert bundle.models["knn"].k == 5
    assert np.array_equal(bundle.models["knn"].rows, models["knn"].rows)
    assert bundle.models["knn"].labels == models["knn"].labels
    for name in ("knn", "cart"):
        assert predict_rows(bundle.models[name], z.rows) == predict_rows(models[name], z.rows)


def test_bundle_with_one_model(tmp_path, trained):
    s, _, models = trained
    path = save_model_bundle(ModelBundle(DEFAULT_FEATURES, s, {"cart": models["cart"]}), tmp_path / "m.json")
    assert set(load_model_bundle(path).models) == {"cart"}


def test_malformed_bundle(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"feature_names": ["cpu_util"]}')
    with pytest.raises(ModelError):
        load_model_bundle(path)


def test_unsupported_model_type():
    with pytest.raises(ModelError):
        predict_rows(object(), np.zeros((1, 1)))
