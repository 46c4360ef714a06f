import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from surrofit import Dataset, Manifest


def build_manifest(n_features=3, profile_length=2):
    return Manifest(
        feature_names=tuple(f"x{i}" for i in range(n_features)),
        target_groups=(
            ("current", tuple(f"cur_{j:02d}" for j in range(profile_length))),
            ("powers", tuple(f"pow_{j:02d}" for j in range(profile_length))),
        ),
        fold_column="fold",
        feature_ranges=tuple((0.0, 1.0) for _ in range(n_features)),
    )


def build_dataset(folds, n_features=3, profile_length=2, seed=0):
    """Small random dataset with the given fold labels."""
    folds = np.asarray(folds)
    rng = np.random.default_rng(seed)
    n = len(folds)
    return Dataset(
        X=rng.random((n, n_features)),
        Y={
            "current": rng.random((n, profile_length)),
            "powers": rng.random((n, profile_length)),
        },
        fold=folds,
        manifest=build_manifest(n_features, profile_length),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
