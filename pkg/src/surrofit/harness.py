"""Final-model training, hold-out evaluation, case ranking, and reports.

Timing rules: train_seconds wraps the model fit call only (preprocessing
and I/O excluded); inference time is reported both batch-amortized (one
predict over the whole hold-out set divided by its size) and as the
median of single-record predict calls. Wall-clock fields are the only
non-reproducible values in any emitted file; ``TIMING_KEYS`` names them
so downstream tooling can mask them when comparing runs.
"""

import csv
import hashlib
import json
import time
from dataclasses import dataclass

import numpy as np

from .dataset import HOLDOUT_FOLD
from .metrics import mse
from .pipeline import FeaturePipeline, features_from_dict, features_to_dict
from .search import STAGE_FINAL, Candidate, build_model, derive_seed
from .tuning import CvReport, select_best
from .validation import ValidationError

MODEL_LOADERS = None  # populated lazily to avoid import cycles

TIMING_KEYS = (
    "train_seconds",
    "inference_seconds_per_record_batch",
    "inference_seconds_per_record_single",
    "wall_seconds",
)

SINGLE_RECORD_TIMING_CALLS = 51


def dataset_digest(csv_path):
    """SHA-256 of the dataset file, recorded in bundles and reports."""
    h = hashlib.sha256()
    with open(csv_path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _model_from_dict(d):
    from .forest import ForestRegressor
    from .mlp import MlpRegressor

    loaders = {"forest": ForestRegressor.from_dict, "mlp": MlpRegressor.from_dict}
    try:
        return loaders[d["kind"]](d)
    except KeyError:
        raise ValidationError(f"unknown serialized model kind {d.get('kind')!r}")


@dataclass
class ModelBundle:
    """A trained model plus everything needed to apply and audit it."""

    model_kind: str
    target_group: str
    candidate: Candidate
    pipeline: FeaturePipeline
    model: object
    seed: int
    train_seconds: float
    dataset_digest: str
    train_target_means: np.ndarray
    cv_mean_mse: float
    cv_std_mse: float

    @property
    def feature_mode(self):
        return self.pipeline.mode

    def to_dict(self):
        return {
            "model_kind": self.model_kind,
            "target_group": self.target_group,
            "candidate": self.candidate.to_dict(),
            "pipeline": self.pipeline.to_dict(),
            "model": self.model.to_dict(),
            "seed": self.seed,
            "train_seconds": self.train_seconds,
            "dataset_digest": self.dataset_digest,
            "train_target_means": self.train_target_means.tolist(),
            "cv_mean_mse": self.cv_mean_mse,
            "cv_std_mse": self.cv_std_mse,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            model_kind=d["model_kind"],
            target_group=d["target_group"],
            candidate=Candidate.from_dict(d["candidate"]),
            pipeline=FeaturePipeline.from_dict(d["pipeline"]),
            model=_model_from_dict(d["model"]),
            seed=d["seed"],
            train_seconds=d["train_seconds"],
            dataset_digest=d["dataset_digest"],
            train_target_means=np.asarray(d["train_target_means"]),
            cv_mean_mse=d["cv_mean_mse"],
            cv_std_mse=d["cv_std_mse"],
        )

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def train_final(candidate, train, target_group, features=None, seed=0,
                digest="", cv_mean_mse=None, cv_std_mse=None):
    """Fit the candidate on the full training partition (folds 0..4)."""
    if (train.fold == HOLDOUT_FOLD).any():
        raise ValidationError(
            "final training data still contains hold-out rows"
        )
    pipeline = FeaturePipeline(features).fit(train.X)
    model = build_model(candidate, derive_seed(seed, STAGE_FINAL))
    X = pipeline.transform(train.X)
    Y = train.Y[target_group]
    t0 = time.perf_counter()
    model.fit(X, Y)
    train_seconds = time.perf_counter() - t0
    return ModelBundle(
        model_kind=candidate.model_kind,
        target_group=target_group,
        candidate=candidate,
        pipeline=pipeline,
        model=model,
        seed=int(seed),
        train_seconds=train_seconds,
        dataset_digest=digest,
        train_target_means=Y.mean(axis=0),
        cv_mean_mse=cv_mean_mse,
        cv_std_mse=cv_std_mse,
    )


def train_from_report(report, train, digest=""):
    """Convenience: pick the report's best candidate and train it under
    the report's seed and feature mode."""
    if not isinstance(report, CvReport):
        raise ValidationError("expected a CvReport")
    return train_final(
        select_best(report), train, report.target_group,
        features=report.features, seed=report.seed, digest=digest,
        cv_mean_mse=report.mean_mse, cv_std_mse=report.std_mse,
    )


@dataclass(frozen=True)
class CaseTriplet:
    """Hold-out records with the best, nearest-to-median, and worst
    per-record MSE, with their truth/prediction profiles."""

    good_index: int
    average_index: int
    poor_index: int
    profiles: dict  # case name -> {"truth": [...], "predicted": [...]}

    def to_dict(self):
        return {
            "good_index": self.good_index,
            "average_index": self.average_index,
            "poor_index": self.poor_index,
            "profiles": self.profiles,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(good_index=d["good_index"], average_index=d["average_index"],
                   poor_index=d["poor_index"], profiles=d["profiles"])


def rank_cases(per_record_mse, truth, predictions):
    """Pick the good/average/poor hold-out cases (ties: lowest index)."""
    scores = np.asarray(per_record_mse, dtype=np.float64)
    t = scores.shape[0]
    if t < 3:
        raise ValidationError(f"need at least 3 hold-out records, got {t}")
    good = int(np.argmin(scores))
    poor = int(np.argmax(scores))
    average = int(np.argmin(np.abs(scores - np.median(scores))))
    profiles = {}
    for name, idx in (("good", good), ("average", average), ("poor", poor)):
        profiles[name] = {
            "truth": np.asarray(truth)[idx].tolist(),
            "predicted": np.asarray(predictions)[idx].tolist(),
        }
    return CaseTriplet(good_index=good, average_index=average,
                       poor_index=poor, profiles=profiles)


@dataclass
class FinalReport:
    """Hold-out evaluation of one trained model."""

    model_kind: str
    target_group: str
    feature_mode: str
    candidate: Candidate
    seed: int
    dataset_digest: str
    cv_mean_mse: float
    cv_std_mse: float
    holdout_mse: float
    baseline_mse: float
    per_record_mse: np.ndarray
    train_seconds: float
    inference_seconds_per_record_batch: float
    inference_seconds_per_record_single: float
    cases: CaseTriplet

    def to_dict(self):
        return {
            "model_kind": self.model_kind,
            "target_group": self.target_group,
            "feature_mode": self.feature_mode,
            "candidate": self.candidate.to_dict(),
            "seed": self.seed,
            "dataset_digest": self.dataset_digest,
            "cv_mean_mse": self.cv_mean_mse,
            "cv_std_mse": self.cv_std_mse,
            "holdout_mse": self.holdout_mse,
            "baseline_mse": self.baseline_mse,
            "per_record_mse": self.per_record_mse.tolist(),
            "train_seconds": self.train_seconds,
            "inference_seconds_per_record_batch":
                self.inference_seconds_per_record_batch,
            "inference_seconds_per_record_single":
                self.inference_seconds_per_record_single,
            "cases": self.cases.to_dict() if self.cases else None,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            model_kind=d["model_kind"],
            target_group=d["target_group"],
            feature_mode=d["feature_mode"],
            candidate=Candidate.from_dict(d["candidate"]),
            seed=d["seed"],
            dataset_digest=d["dataset_digest"],
            cv_mean_mse=d["cv_mean_mse"],
            cv_std_mse=d["cv_std_mse"],
            holdout_mse=d["holdout_mse"],
            baseline_mse=d["baseline_mse"],
            per_record_mse=np.asarray(d["per_record_mse"]),
            train_seconds=d["train_seconds"],
            inference_seconds_per_record_batch=
                d["inference_seconds_per_record_batch"],
            inference_seconds_per_record_single=
                d["inference_seconds_per_record_single"],
            cases=CaseTriplet.from_dict(d["cases"]) if d["cases"] else None,
        )

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def evaluate_holdout(bundle, test):
    """Score a trained bundle on the hold-out partition."""
    if test.n_records == 0:
        raise ValidationError("hold-out set is empty")
    if (test.fold != HOLDOUT_FOLD).any():
        raise ValidationError("hold-out set must contain only fold -1 rows")

    X = bundle.pipeline.transform(test.X)
    truth = test.Y[bundle.target_group]

    t0 = time.perf_counter()
    predictions = bundle.model.predict(X)
    batch_seconds = (time.perf_counter() - t0) / test.n_records

    n_single = min(test.n_records, SINGLE_RECORD_TIMING_CALLS)
    single_times = np.empty(n_single)
    for i in range(n_single):
        row = X[i:i + 1]
        t0 = time.perf_counter()
        bundle.model.predict(row)
        single_times[i] = time.perf_counter() - t0
    single_seconds = float(np.median(single_times))

    diff = truth - predictions
    per_record = (diff * diff).mean(axis=1)
    holdout_mse = float(per_record.mean())

    baseline = np.tile(bundle.train_target_means, (test.n_records, 1))
    baseline_mse = mse(truth, baseline)

    cases = (rank_cases(per_record, truth, predictions)
             if test.n_records >= 3 else None)

    return FinalReport(
        model_kind=bundle.model_kind,
        target_group=bundle.target_group,
        feature_mode=bundle.feature_mode,
        candidate=bundle.candidate,
        seed=bundle.seed,
        dataset_digest=bundle.dataset_digest,
        cv_mean_mse=bundle.cv_mean_mse,
        cv_std_mse=bundle.cv_std_mse,
        holdout_mse=holdout_mse,
        baseline_mse=baseline_mse,
        per_record_mse=per_record,
        train_seconds=bundle.train_seconds,
        inference_seconds_per_record_batch=batch_seconds,
        inference_seconds_per_record_single=single_seconds,
        cases=cases,
    )


def _report_slug(report):
    return f"{report.model_kind}_{report.target_group}_{report.feature_mode}"


def report_filename(report):
    return f"final_{_report_slug(report)}.json"


def cases_filename(report):
    return f"cases_{_report_slug(report)}.csv"


def write_cases_csv(report, path):
    if report.cases is None:
        raise ValidationError("report has no case triplet (hold-out < 3 rows)")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case", "output_index", "truth", "predicted"])
        for case in ("good", "average", "poor"):
            profile = report.cases.profiles[case]
            for j, (t, p) in enumerate(zip(profile["truth"],
                                           profile["predicted"])):
                writer.writerow([case, j, "%.17g" % t, "%.17g" % p])


SUMMARY_COLUMNS = (
    "model_kind", "feature_mode", "target_group",
    "cv_mean_mse", "cv_std_mse", "holdout_mse", "baseline_mse",
    "train_minutes", "inference_ms_batch", "inference_ms_single",
)


def _cell(value):
    return "" if value is None else "%.10g" % value


def write_summary_csv(reports, path):
    """One row per evaluated (model, feature mode, target group)."""
    rows = sorted(reports, key=lambda r: (r.model_kind, r.feature_mode,
                                          r.target_group))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for r in rows:
            writer.writerow([
                r.model_kind, r.feature_mode, r.target_group,
                _cell(r.cv_mean_mse), _cell(r.cv_std_mse),
                "%.10g" % r.holdout_mse, "%.10g" % r.baseline_mse,
                "%.10g" % (r.train_seconds / 60.0),
                "%.10g" % (r.inference_seconds_per_record_batch * 1e3),
                "%.10g" % (r.inference_seconds_per_record_single * 1e3),
            ])


def make_report(reports, out_dir):
    """Materialize the summary table, case-triplet CSVs, and the
    machine-readable report JSONs; returns the paths written."""
    if not reports:
        raise ValidationError("no evaluations to report")
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    summary = out_dir / "summary.csv"
    write_summary_csv(reports, summary)
    written.append(summary)
    for report in reports:
        json_path = out_dir / report_filename(report)
        report.save(json_path)
        written.append(json_path)
        if report.cases is not None:
            cases_path = out_dir / cases_filename(report)
            write_cases_csv(report, cases_path)
            written.append(cases_path)
    return written
