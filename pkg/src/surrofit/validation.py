"""Input-validation helpers shared by the estimators and pipeline code."""

import numpy as np


class ValidationError(ValueError):
    """A contract violation: bad shapes, bad values, inconsistent inputs."""


class ParseError(ValidationError):
    """A file cell that could not be parsed; carries row/column context."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


def as_matrix(X, name="X", n_cols=None, dtype=np.float64):
    """Coerce to a 2-D float array, rejecting non-finite values.

    ``n_cols`` pins the expected column count (e.g. a fitted estimator's
    feature count).
    """
    X = np.asarray(X, dtype=dtype)
    if X.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ValidationError(f"{name} contains non-finite values")
    if n_cols is not None and X.shape[1] != n_cols:
        raise ValidationError(
            f"{name} has {X.shape[1]} columns, expected {n_cols}"
        )
    return X


def check_same_rows(X, Y, x_name="X", y_name="Y"):
    if X.shape[0] != Y.shape[0]:
        raise ValidationError(
            f"{x_name} has {X.shape[0]} rows but {y_name} has {Y.shape[0]}"
        )


def check_fitted(estimator, attribute):
    if not hasattr(estimator, attribute):
        raise ValidationError(
            f"{type(estimator).__name__} is not fitted (missing {attribute!r})"
        )
