"""Cross-validation scoring and the nested-CV hyperparameter search.

The outer loop rotates each labeled fold out as the unbiased scoring set;
the inner loop scores every sampled candidate by k-fold CV over the
remaining four folds, refits the inner winner on all four, and scores it
once on the held-out fold. Preprocessing (standardizer, optional column
selection or PCA) is refitted on every fitting partition so no validation
or outer-fold row ever influences the transform applied to it.
"""

import json
import time
from dataclasses import dataclass

import numpy as np

from .dataset import CV_FOLDS, extract_fold
from .metrics import mse
from .pipeline import FeaturePipeline, features_from_dict, features_to_dict
from .search import (STAGE_FIT, STAGE_REFIT, STAGE_SAMPLE, Candidate,
                     build_model, derive_seed, sample_candidates)
from .validation import ValidationError


def _fit_and_score(candidate, fit_part, val_part, target_group, features,
                   model_seed):
    pipeline = FeaturePipeline(features).fit(fit_part.X)
    model = build_model(candidate, model_seed)
    model.fit(pipeline.transform(fit_part.X), fit_part.Y[target_group])
    predictions = model.predict(pipeline.transform(val_part.X))
    return mse(val_part.Y[target_group], predictions)


def cross_validate(candidate, train, target_group, features=None, seed=0):
    """Score one candidate by 5-fold CV; returns (mean_mse, std_mse).

    The per-fold model seed is derived from (seed, fold); std is the
    population standard deviation over the five fold scores.
    """
    scores = []
    for k in CV_FOLDS:
        fit_part, val_part = extract_fold(train, k)
        try:
            scores.append(_fit_and_score(
                candidate, fit_part, val_part, target_group, features,
                derive_seed(seed, STAGE_FIT, k),
            ))
        except ValidationError as exc:
            raise ValidationError(f"fold {k}: {exc}") from exc
    scores = np.asarray(scores)
    return float(scores.mean()), float(scores.std())


@dataclass(frozen=True)
class FoldRecord:
    fold: int
    candidate: Candidate
    mse: float

    def to_dict(self):
        return {"fold": self.fold, "candidate": self.candidate.to_dict(),
                "mse": self.mse}

    @classmethod
    def from_dict(cls, d):
        return cls(fold=d["fold"], candidate=Candidate.from_dict(d["candidate"]),
                   mse=d["mse"])


@dataclass(frozen=True)
class CvReport:
    """Per-outer-fold winners and scores, plus aggregate statistics and
    everything needed to reproduce the run."""

    records: tuple  # FoldRecord per outer fold
    mean_mse: float
    std_mse: float
    wall_seconds: float
    model_kind: str
    target_group: str
    features: object  # None | FeatureSelection | PcaConfig
    n_iter: int
    seed: int

    def to_dict(self):
        return {
            "records": [r.to_dict() for r in self.records],
            "mean_mse": self.mean_mse,
            "std_mse": self.std_mse,
            "wall_seconds": self.wall_seconds,
            "model_kind": self.model_kind,
            "target_group": self.target_group,
            "features": features_to_dict(self.features),
            "n_iter": self.n_iter,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            records=tuple(FoldRecord.from_dict(r) for r in d["records"]),
            mean_mse=d["mean_mse"],
            std_mse=d["std_mse"],
            wall_seconds=d["wall_seconds"],
            model_kind=d["model_kind"],
            target_group=d["target_group"],
            features=features_from_dict(d["features"]),
            n_iter=d["n_iter"],
            seed=d["seed"],
        )

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _inner_folds(train, outer_fold):
    return [k for k in CV_FOLDS if k != outer_fold]


def nested_cv(space, n_iter, train, target_group, features=None, seed=0):
    """Nested cross-validation with randomized search per outer fold."""
    t0 = time.perf_counter()
    records = []
    for k in CV_FOLDS:
        inner_train, outer_val = extract_fold(train, k)
        candidates = sample_candidates(
            space, n_iter, derive_seed(seed, STAGE_SAMPLE, k)
        )
        best_inner = np.inf
        best_candidate = None
        for candidate in candidates:
            inner_scores = []
            for j in _inner_folds(train, k):
                fit_part, val_part = extract_fold(inner_train, j)
                try:
                    inner_scores.append(_fit_and_score(
                        candidate, fit_part, val_part, target_group, features,
                        derive_seed(seed, STAGE_FIT, k, candidate.draw_index, j),
                    ))
                except ValidationError as exc:
                    raise ValidationError(
                        f"outer fold {k}, candidate {candidate.draw_index}, "
                        f"inner fold {j}: {exc}"
                    ) from exc
            inner_mean = float(np.mean(inner_scores))
            if inner_mean < best_inner:
                best_inner = inner_mean
                best_candidate = candidate
        try:
            outer_mse = _fit_and_score(
                best_candidate, inner_train, outer_val, target_group, features,
                derive_seed(seed, STAGE_REFIT, k),
            )
        except ValidationError as exc:
            raise ValidationError(f"outer fold {k} refit: {exc}") from exc
        records.append(FoldRecord(fold=k, candidate=best_candidate,
                                  mse=outer_mse))
    scores = np.asarray([r.mse for r in records])
    return CvReport(
        records=tuple(records),
        mean_mse=float(scores.mean()),
        std_mse=float(scores.std()),
        wall_seconds=time.perf_counter() - t0,
        model_kind=space.model_kind,
        target_group=target_group,
        features=features,
        n_iter=n_iter,
        seed=int(seed),
    )


def select_best(report):
    """The candidate from the fold with minimal outer MSE (lowest fold
    index wins ties)."""
    if not report.records:
        raise ValidationError("empty CV report")
    best = report.records[0]
    for record in report.records[1:]:
        if record.mse < best.mse:
            best = record
    return best.candidate
