import numpy as np
import pytest

from surrofit import ValidationError, mse

from oracles import naive_mse


def test_zero_for_identical_arrays():
    y = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert mse(y, y) == 0.0


def test_unit_error():
    assert mse(np.array([[0.0, 0.0]]), np.array([[1.0, 1.0]])) == 1.0


def test_hand_computed_example():
    y = np.array([[1.0, 2.0], [3.0, 0.0]])
    yhat = np.zeros((2, 2))
    assert mse(y, yhat) == (1 + 4 + 9 + 0) / 4


def test_matches_naive_oracle_on_random_shapes(rng):
    for _ in range(100):
        m = int(rng.integers(1, 40))
        p = int(rng.integers(1, 30))
        y = rng.normal(size=(m, p))
        yhat = rng.normal(size=(m, p))
        assert mse(y, yhat) == pytest.approx(naive_mse(y, yhat), abs=1e-12)


def test_shape_mismatch_rejected():
    with pytest.raises(ValidationError):
        mse(np.zeros((2, 3)), np.zeros((3, 2)))


def test_empty_rejected():
    with pytest.raises(ValidationError):
        mse(np.zeros((0, 2)), np.zeros((0, 2)))
