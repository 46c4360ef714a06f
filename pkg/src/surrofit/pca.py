"""Principal component transform via eigendecomposition of the covariance."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .validation import ValidationError, as_matrix, check_fitted


class PcaTransform(BaseEstimator, TransformerMixin):
    """Project onto the top eigenvectors of the population covariance.

    The feature count is tiny here, so the F x F covariance matrix is
    eigendecomposed directly (population 1/N convention, matching the
    standardizer). Components are oriented so their largest-magnitude
    entry is positive, which makes serialized transforms reproducible.
    Inputs are expected pre-standardized.
    """

    def __init__(self, n_components=5):
        self.n_components = n_components

    def fit(self, X, y=None):
        k = int(self.n_components)
        if k < 1:
            raise ValidationError("n_components must be positive")
        X = as_matrix(X)
        n, f = X.shape
        if n < 2:
            raise ValidationError("PCA needs at least 2 rows")
        if k > f:
            raise ValidationError(
                f"n_components={k} exceeds feature count {f}"
            )
        self.mean_ = X.mean(axis=0)
        xc = X - self.mean_
        cov = (xc.T @ xc) / n
        eigenvalues, eigenvectors = np.linalg.eigh(cov)
        order = np.argsort(eigenvalues)[::-1][:k]
        values = np.maximum(eigenvalues[order], 0.0)
        components = eigenvectors[:, order].T
        for row in components:
            if row[np.argmax(np.abs(row))] < 0:
                row *= -1.0
        self.components_ = components
        self.explained_variance_ = values
        self.n_features_in_ = f
        return self

    def transform(self, X):
        check_fitted(self, "components_")
        X = as_matrix(X, n_cols=self.n_features_in_)
        return (X - self.mean_) @ self.components_.T

    def inverse_transform(self, Z):
        check_fitted(self, "components_")
        Z = as_matrix(Z, name="Z", n_cols=self.components_.shape[0])
        return self.mean_ + Z @ self.components_

    def to_dict(self):
        check_fitted(self, "components_")
        return {
            "n_components": int(self.n_components),
            "mean": self.mean_.tolist(),
            "components": self.components_.tolist(),
            "explained_variance": self.explained_variance_.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        p = cls(n_components=d["n_components"])
        p.mean_ = np.asarray(d["mean"], dtype=np.float64)
        p.components_ = np.asarray(d["components"], dtype=np.float64)
        p.explained_variance_ = np.asarray(d["explained_variance"],
                                           dtype=np.float64)
        p.n_features_in_ = p.mean_.shape[0]
        return p
