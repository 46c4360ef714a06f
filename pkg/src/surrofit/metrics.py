"""Accuracy metric used throughout tuning and evaluation."""

import numpy as np

from .validation import ValidationError


def mse(y_true, y_pred):
    """Mean squared error, averaged uniformly over every entry.

    Both arrays must have identical shape; multi-output targets are
    averaged across samples and output components alike.
    """
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape:
        raise ValidationError(
            f"shape mismatch: {y_true.shape} vs {y_pred.shape}"
        )
    if y_true.size == 0:
        raise ValidationError("mse of empty arrays is undefined")
    diff = y_true - y_pred
    return float(np.mean(diff * diff))
