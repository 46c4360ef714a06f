"""Feature pipeline: the per-fit preprocessing in front of every model.

Three modes:

* ``all``     -- standardize every feature;
* ``reduced`` -- keep the selected columns, then standardize those;
* ``pca``     -- standardize every feature, then project onto the top
  principal components (refitted on each fitting partition, like the
  standardizer, so no validation rows leak into the projection).

The pipeline is always fitted on the fitting partition only and applied
to validation/test rows.
"""

from dataclasses import dataclass

import numpy as np

from .featsel import FeatureSelection
from .pca import PcaTransform
from .preprocessing import Standardizer
from .validation import ValidationError, check_fitted

FEATURE_MODES = ("all", "reduced", "pca")


@dataclass(frozen=True)
class PcaConfig:
    """Request to train on principal components instead of raw features."""

    n_components: int = 5


def feature_mode(features):
    if features is None:
        return "all"
    if isinstance(features, FeatureSelection):
        return "reduced"
    if isinstance(features, PcaConfig):
        return "pca"
    raise ValidationError(
        f"features must be None, FeatureSelection, or PcaConfig, "
        f"got {type(features).__name__}"
    )


def features_to_dict(features):
    mode = feature_mode(features)
    if mode == "all":
        return {"mode": "all"}
    if mode == "reduced":
        return {"mode": "reduced", **features.to_dict()}
    return {"mode": "pca", "n_components": features.n_components}


def features_from_dict(d):
    mode = d["mode"]
    if mode == "all":
        return None
    if mode == "reduced":
        return FeatureSelection(kept=d["kept"], dropped=d["dropped"],
                                threshold=d["threshold"])
    if mode == "pca":
        return PcaConfig(n_components=d["n_components"])
    raise ValidationError(f"unknown feature mode {mode!r}")


class FeaturePipeline:
    """Fit-on-train / apply-everywhere preprocessing for one model."""

    def __init__(self, features=None):
        self.features = features
        self.mode = feature_mode(features)

    def fit(self, X):
        X = np.asarray(X, dtype=np.float64)
        if self.mode == "reduced":
            kept = list(self.features.kept)
            if max(kept) >= X.shape[1]:
                raise ValidationError(
                    f"selection references column {max(kept)} but X has "
                    f"{X.shape[1]} columns"
                )
            self.scaler_ = Standardizer().fit(X[:, kept])
        elif self.mode == "pca":
            self.scaler_ = Standardizer().fit(X)
            self.pca_ = PcaTransform(
                n_components=self.features.n_components
            ).fit(self.scaler_.transform(X))
        else:
            self.scaler_ = Standardizer().fit(X)
        return self

    def transform(self, X):
        check_fitted(self, "scaler_")
        X = np.asarray(X, dtype=np.float64)
        if self.mode == "reduced":
            return self.scaler_.transform(X[:, list(self.features.kept)])
        if self.mode == "pca":
            return self.pca_.transform(self.scaler_.transform(X))
        return self.scaler_.transform(X)

    def to_dict(self):
        check_fitted(self, "scaler_")
        d = {
            "features": features_to_dict(self.features),
            "scaler": self.scaler_.to_dict(),
        }
        if self.mode == "pca":
            d["pca"] = self.pca_.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        pipe = cls(features_from_dict(d["features"]))
        pipe.scaler_ = Standardizer.from_dict(d["scaler"])
        if pipe.mode == "pca":
            pipe.pca_ = PcaTransform.from_dict(d["pca"])
        return pipe
