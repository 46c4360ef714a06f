import numpy as np
import pytest

from surrofit import Standardizer, ValidationError


def test_hand_computed_column():
    s = Standardizer().fit(np.array([[1.0], [2.0], [3.0]]))
    assert s.mean_[0] == pytest.approx(2.0)
    assert s.scale_[0] == pytest.approx(np.sqrt(2.0 / 3.0))


def test_constant_column_degeneracy_rule():
    s = Standardizer().fit(np.array([[5.0], [5.0], [5.0]]))
    assert s.mean_[0] == 5.0
    assert s.scale_[0] == 1.0
    out = s.transform(np.array([[5.0], [5.0]]))
    assert (out == 0.0).all()


def test_population_std_convention():
    s = Standardizer().fit(np.array([[0.0], [0.0], [4.0], [4.0]]))
    assert s.mean_[0] == pytest.approx(2.0)
    assert s.scale_[0] == pytest.approx(2.0)


def test_mean_value_maps_to_zero():
    s = Standardizer().fit(np.array([[1.0], [2.0], [3.0]]))
    assert s.transform(np.array([[2.0]]))[0, 0] == 0.0


def test_known_transform():
    s = Standardizer()
    s.mean_ = np.array([0.0])
    s.scale_ = np.array([2.0])
    s.n_features_in_ = 1
    assert s.transform(np.array([[4.0]]))[0, 0] == 2.0


def test_fit_transform_normalizes(rng):
    for _ in range(50):
        n = int(rng.integers(2, 60))
        f = int(rng.integers(1, 12))
        X = rng.normal(loc=rng.normal(0, 10), scale=rng.uniform(0.1, 50),
                       size=(n, f))
        out = Standardizer().fit(X).transform(X)
        assert np.abs(out.mean(axis=0)).max() <= 1e-9
        assert np.abs(out.std(axis=0) - 1.0).max() <= 1e-9


def test_transform_on_unseen_rows_is_finite(rng):
    X = rng.normal(size=(20, 3))
    other = rng.normal(size=(10, 3)) + 5.0
    out = Standardizer().fit(X).transform(other)
    assert np.isfinite(out).all()
    assert abs(out.mean()) > 0.1  # fitted on different rows, mean shifts


def test_dimension_mismatch_rejected(rng):
    s = Standardizer().fit(rng.normal(size=(5, 3)))
    with pytest.raises(ValidationError):
        s.transform(rng.normal(size=(5, 4)))


def test_serialization_roundtrip(rng):
    X = rng.normal(size=(10, 4))
    s = Standardizer().fit(X)
    restored = Standardizer.from_dict(s.to_dict())
    assert (restored.transform(X) == s.transform(X)).all()
