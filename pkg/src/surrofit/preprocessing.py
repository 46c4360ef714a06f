"""Feature standardization fitted on training data only."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .validation import ValidationError, as_matrix, check_fitted

DEGENERATE_STD = 1e-12


class Standardizer(BaseEstimator, TransformerMixin):
    """Center each feature to zero mean and scale to unit variance.

    Uses the population (1/N) standard deviation. Columns whose std falls
    below ``degenerate_tol`` keep scale 1 and their exact constant as the
    mean, so degenerate columns transform to exact zeros instead of
    dividing by zero.
    """

    def __init__(self, degenerate_tol=DEGENERATE_STD):
        self.degenerate_tol = degenerate_tol

    def fit(self, X, y=None):
        X = as_matrix(X)
        if X.shape[0] < 1:
            raise ValidationError("cannot fit a standardizer on 0 rows")
        mean = X.mean(axis=0)
        centered = X - mean
        std = np.sqrt((centered * centered).mean(axis=0))
        degenerate = std < self.degenerate_tol
        # Constant columns: pin the mean to the exact constant so the
        # transform output is exactly zero.
        col_min = X.min(axis=0)
        exact_const = col_min == X.max(axis=0)
        mean = np.where(exact_const, col_min, mean)
        self.mean_ = mean
        self.scale_ = np.where(degenerate, 1.0, std)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_fitted(self, "mean_")
        X = as_matrix(X, n_cols=self.n_features_in_)
        return (X - self.mean_) / self.scale_

    def to_dict(self):
        check_fitted(self, "mean_")
        return {
            "mean": self.mean_.tolist(),
            "scale": self.scale_.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        s = cls()
        s.mean_ = np.asarray(d["mean"], dtype=np.float64)
        s.scale_ = np.asarray(d["scale"], dtype=np.float64)
        s.n_features_in_ = s.mean_.shape[0]
        return s
