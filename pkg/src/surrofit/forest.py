"""Multi-output random forest regressor built on flat-array CART trees.

Each tree greedily minimizes the weighted sum of the children's total
target variance, summed over all outputs; forest predictions average the
per-tree leaf means. Per-tree randomness (bootstrap draw and per-node
feature subsets) comes from independent streams derived from the forest
seed and the tree index, so fits are reproducible tree by tree.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from ._tree import accumulate_tree_predictions, grow_tree
from .validation import ValidationError, as_matrix, check_fitted, check_same_rows

_UNLIMITED_DEPTH = np.iinfo(np.int64).max
MAX_FEATURES_MODES = ("all", "sqrt")


@dataclass
class Tree:
    """One fitted tree as flat parallel arrays (feature < 0 marks leaves)."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf_values: np.ndarray

    @property
    def n_nodes(self):
        return self.feature.shape[0]

    def to_dict(self):
        values = [
            self.leaf_values[i].tolist() if self.feature[i] < 0 else None
            for i in range(self.n_nodes)
        ]
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "leaf_values": values,
        }

    @classmethod
    def from_dict(cls, d, n_outputs):
        feature = np.asarray(d["feature"], dtype=np.int64)
        leaf_values = np.zeros((feature.shape[0], n_outputs))
        for i, row in enumerate(d["leaf_values"]):
            if row is not None:
                leaf_values[i] = row
        return cls(
            feature=feature,
            threshold=np.asarray(d["threshold"], dtype=np.float64),
            left=np.asarray(d["left"], dtype=np.int64),
            right=np.asarray(d["right"], dtype=np.int64),
            leaf_values=leaf_values,
        )


def _resolve_max_features(max_features, n_features):
    if max_features == "all":
        return n_features
    if max_features == "sqrt":
        return max(1, int(np.sqrt(n_features)))
    f = float(max_features)
    if not 0.0 < f <= 1.0:
        raise ValidationError(
            f"max_features fraction must be in (0, 1], got {max_features!r}"
        )
    return max(1, int(f * n_features))


def _tree_streams(seed, tree_index):
    """Per-tree randomness: SeedSequence((seed, t)) spawns the bootstrap
    generator and the uint64 state for the in-node feature-subset stream."""
    root = np.random.SeedSequence([int(seed), int(tree_index)])
    bootstrap_seq, node_seq = root.spawn(2)
    rng = np.random.default_rng(bootstrap_seq)
    node_state = np.uint64(node_seq.generate_state(1, dtype=np.uint64)[0])
    return rng, node_state


class ForestRegressor(BaseEstimator, RegressorMixin):
    """Bootstrap-aggregated CART trees predicting full output profiles.

    Parameters
    ----------
    n_estimators : number of trees.
    max_depth : maximum tree depth, or None for unlimited.
    min_samples_split : smallest node that may still be split.
    min_samples_leaf : smallest allowed child size.
    max_features : "all", "sqrt", or a fraction in (0, 1]; the per-node
        candidate-feature subset size.
    bootstrap : draw a with-replacement sample per tree when True.
    seed : root seed for all per-tree randomness.
    """

    def __init__(self, n_estimators=50, max_depth=None, min_samples_split=2,
                 min_samples_leaf=1, max_features="all", bootstrap=True,
                 seed=0):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    def _check_params(self):
        if self.n_estimators < 1:
            raise ValidationError("n_estimators must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValidationError("max_depth must be positive or None")
        if self.min_samples_split < 2:
            raise ValidationError("min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise ValidationError("min_samples_leaf must be >= 1")
        if int(self.seed) < 0:
            raise ValidationError("seed must be a nonnegative integer")

    def fit(self, X, y):
        self._check_params()
        X = as_matrix(X)
        y = np.asarray(y, dtype=np.float64)
        self._single_output = y.ndim == 1
        Y = y.reshape(-1, 1) if self._single_output else as_matrix(y, name="y")
        check_same_rows(X, Y, "X", "y")
        n = X.shape[0]
        if n < self.min_samples_split:
            raise ValidationError(
                f"need at least min_samples_split={self.min_samples_split} "
                f"rows, got {n}"
            )
        max_depth = (_UNLIMITED_DEPTH if self.max_depth is None
                     else int(self.max_depth))
        m_features = _resolve_max_features(self.max_features, X.shape[1])

        X = np.ascontiguousarray(X)
        Y = np.ascontiguousarray(Y)
        self.trees_ = []
        for t in range(self.n_estimators):
            rng, node_state = _tree_streams(self.seed, t)
            if self.bootstrap:
                rows = rng.integers(0, n, size=n, dtype=np.int64)
            else:
                rows = np.arange(n, dtype=np.int64)
            feature, threshold, left, right, leaf_values, n_nodes = grow_tree(
                X, Y, rows, max_depth, int(self.min_samples_split),
                int(self.min_samples_leaf), m_features, node_state,
            )
            self.trees_.append(Tree(
                feature=feature[:n_nodes].copy(),
                threshold=threshold[:n_nodes].copy(),
                left=left[:n_nodes].copy(),
                right=right[:n_nodes].copy(),
                leaf_values=leaf_values[:n_nodes].copy(),
            ))
        self.n_features_in_ = X.shape[1]
        self.n_outputs_ = Y.shape[1]
        return self

    def predict(self, X):
        check_fitted(self, "trees_")
        X = as_matrix(X, n_cols=self.n_features_in_)
        out = np.zeros((X.shape[0], self.n_outputs_))
        for tree in self.trees_:
            accumulate_tree_predictions(
                tree.feature, tree.threshold, tree.left, tree.right,
                tree.leaf_values, X, out,
            )
        out /= len(self.trees_)
        return out[:, 0] if self._single_output else out

    def to_dict(self):
        check_fitted(self, "trees_")
        return {
            "kind": "forest",
            "params": self.get_params(),
            "n_features": self.n_features_in_,
            "n_outputs": self.n_outputs_,
            "single_output": self._single_output,
            "trees": [t.to_dict() for t in self.trees_],
        }

    @classmethod
    def from_dict(cls, d):
        model = cls(**d["params"])
        model.n_features_in_ = d["n_features"]
        model.n_outputs_ = d["n_outputs"]
        model._single_output = d["single_output"]
        model.trees_ = [Tree.from_dict(t, d["n_outputs"]) for t in d["trees"]]
        return model
