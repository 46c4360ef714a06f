"""Pearson correlation maps and threshold-based feature elimination."""

import csv
from dataclasses import dataclass

import numpy as np

from .validation import ValidationError, as_matrix, check_same_rows

DEFAULT_THRESHOLD = 0.1


@dataclass(frozen=True)
class CorrelationMap:
    """Pearson coefficients between each feature and each target column."""

    r: np.ndarray  # (F, T)
    feature_names: tuple
    target_names: tuple

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "target_names", tuple(self.target_names))
        if self.r.shape != (len(self.feature_names), len(self.target_names)):
            raise ValidationError(
                f"correlation matrix shape {self.r.shape} does not match "
                f"{len(self.feature_names)} features x "
                f"{len(self.target_names)} targets"
            )


def correlation_map(X, Y, feature_names=None, target_names=None):
    """Pearson coefficient between every feature and target column.

    Zero-variance columns on either side yield r = 0 by convention.
    """
    X = as_matrix(X)
    Y = as_matrix(Y, name="Y")
    check_same_rows(X, Y, "X", "Y")
    n = X.shape[0]
    if n < 2:
        raise ValidationError("correlation needs at least 2 rows")
    xc = X - X.mean(axis=0)
    yc = Y - Y.mean(axis=0)
    x_norm = np.sqrt((xc * xc).sum(axis=0))
    y_norm = np.sqrt((yc * yc).sum(axis=0))
    denom = np.outer(x_norm, y_norm)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = (xc.T @ yc) / denom
    r[denom == 0.0] = 0.0
    r = np.clip(r, -1.0, 1.0)
    if feature_names is None:
        feature_names = tuple(f"x{i}" for i in range(X.shape[1]))
    if target_names is None:
        target_names = tuple(f"y{j}" for j in range(Y.shape[1]))
    return CorrelationMap(r=r, feature_names=feature_names,
                          target_names=target_names)


@dataclass(frozen=True)
class FeatureSelection:
    """Partition of feature indices into kept and dropped, with the
    threshold that produced it."""

    kept: tuple
    dropped: tuple
    threshold: float

    def __post_init__(self):
        object.__setattr__(self, "kept", tuple(int(i) for i in self.kept))
        object.__setattr__(self, "dropped", tuple(int(i) for i in self.dropped))
        if not self.kept:
            raise ValidationError("feature selection keeps no features")
        overlap = set(self.kept) & set(self.dropped)
        if overlap:
            raise ValidationError(
                f"kept and dropped overlap: {sorted(overlap)}"
            )

    def to_dict(self):
        return {
            "kept": list(self.kept),
            "dropped": list(self.dropped),
            "threshold": self.threshold,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(kept=d["kept"], dropped=d["dropped"],
                   threshold=d["threshold"])


def select_features(cmap, threshold=DEFAULT_THRESHOLD):
    """Keep feature i iff max_j |r[i, j]| >= threshold."""
    if threshold < 0:
        raise ValidationError("threshold must be nonnegative")
    strength = np.abs(cmap.r).max(axis=1)
    kept = tuple(int(i) for i in np.flatnonzero(strength >= threshold))
    dropped = tuple(int(i) for i in np.flatnonzero(strength < threshold))
    if not kept:
        raise ValidationError(
            f"threshold {threshold} drops every feature "
            f"(max |r| = {strength.max():.4g})"
        )
    return FeatureSelection(kept=kept, dropped=dropped, threshold=threshold)


def write_correlation_csv(cmap, path):
    """Matrix layout: one row per feature, one column per target."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature"] + list(cmap.target_names))
        for i, name in enumerate(cmap.feature_names):
            writer.writerow([name] + ["%.17g" % v for v in cmap.r[i]])


def write_correlation_long_csv(cmap, path, mask_threshold=DEFAULT_THRESHOLD):
    """Long layout for plotting: feature, target, r, and a masked flag that
    mirrors leaving weak cells (|r| below the display threshold) blank."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "target", "r", "masked"])
        for i, f_name in enumerate(cmap.feature_names):
            for j, t_name in enumerate(cmap.target_names):
                r = cmap.r[i, j]
                writer.writerow(
                    [f_name, t_name, "%.17g" % r,
                     "1" if abs(r) < mask_threshold else "0"]
                )
