"""Dataset container, CSV round trip, and fold partition operations.

On-disk layout is a single CSV (features, then each target group's columns,
then the integer fold column) plus a JSON manifest naming the columns.
Floats are printed with 17 significant digits so the round trip is exact.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .manifest import Manifest, load_manifest
from .validation import ParseError, ValidationError

HOLDOUT_FOLD = -1
CV_FOLDS = (0, 1, 2, 3, 4)
VALID_FOLDS = frozenset((HOLDOUT_FOLD,) + CV_FOLDS)


@dataclass(frozen=True)
class Dataset:
    """Feature matrix, per-group target matrices, and fold labels.

    Immutable after construction; fold values are -1 for the hold-out
    partition and 0..4 for the five CV folds.
    """

    X: np.ndarray
    Y: dict  # group name -> (N, P) array
    fold: np.ndarray
    manifest: Manifest

    def __post_init__(self):
        X = np.ascontiguousarray(self.X, dtype=np.float64)
        fold = np.asarray(self.fold, dtype=np.int64)
        Y = {g: np.ascontiguousarray(m, dtype=np.float64)
             for g, m in self.Y.items()}
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "fold", fold)
        self._validate()

    def _validate(self):
        m = self.manifest
        if self.X.ndim != 2 or self.X.shape[1] != m.n_features:
            raise ValidationError(
                f"X must be N x {m.n_features}, got {self.X.shape}"
            )
        n = self.X.shape[0]
        if self.fold.shape != (n,):
            raise ValidationError("fold must be a length-N vector")
        if set(self.Y) != set(m.group_names):
            raise ValidationError(
                f"target groups {sorted(self.Y)} do not match manifest "
                f"{sorted(m.group_names)}"
            )
        for g, mat in self.Y.items():
            p = len(m.group_columns(g))
            if mat.shape != (n, p):
                raise ValidationError(
                    f"target group {g!r} must be {n} x {p}, got {mat.shape}"
                )
            if not np.isfinite(mat).all():
                raise ValidationError(f"target group {g!r} has non-finite values")
        if not np.isfinite(self.X).all():
            raise ValidationError("X has non-finite values")
        bad = set(np.unique(self.fold)) - VALID_FOLDS
        if bad:
            raise ValidationError(
                f"fold values {sorted(bad)} outside {sorted(VALID_FOLDS)}"
            )

    @property
    def n_records(self):
        return self.X.shape[0]

    def take(self, indices):
        """Row subset preserving order; shares the manifest."""
        idx = np.asarray(indices)
        return Dataset(
            X=self.X[idx],
            Y={g: m[idx] for g, m in self.Y.items()},
            fold=self.fold[idx],
            manifest=self.manifest,
        )


def save_dataset(dataset, csv_path):
    m = dataset.manifest
    header = list(m.feature_names)
    for _, cols in m.target_groups:
        header.extend(cols)
    header.append(m.fold_column)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        targets = [dataset.Y[g] for g, _ in m.target_groups]
        for i in range(dataset.n_records):
            row = ["%.17g" % v for v in dataset.X[i]]
            for t in targets:
                row.extend("%.17g" % v for v in t[i])
            row.append("%d" % dataset.fold[i])
            writer.writerow(row)


def _parse_float(cell, row, column):
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(
            f"row {row}, column {column!r}: cannot parse {cell!r} as a number",
            row=row, column=column,
        )
    if not np.isfinite(value):
        raise ParseError(
            f"row {row}, column {column!r}: non-finite value {cell!r}",
            row=row, column=column,
        )
    return value


def load_dataset(csv_path, manifest_path):
    """Read a dataset CSV against its manifest.

    Column order in the file is free; the manifest decides which columns are
    read. Raises :class:`ParseError` with row/column context for bad cells
    and :class:`ValidationError` for structural problems.
    """
    manifest = (manifest_path if isinstance(manifest_path, Manifest)
                else load_manifest(manifest_path))
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{csv_path} is empty")
        rows = list(reader)

    positions = {name: i for i, name in enumerate(header)}
    needed = list(manifest.feature_names)
    for _, cols in manifest.target_groups:
        needed.extend(cols)
    needed.append(manifest.fold_column)
    missing = [name for name in needed if name not in positions]
    if missing:
        raise ValidationError(
            f"{csv_path} is missing columns: {', '.join(missing)}"
        )

    n = len(rows)
    f_idx = [positions[name] for name in manifest.feature_names]
    X = np.empty((n, manifest.n_features))
    Y = {}
    g_idx = {}
    for group, cols in manifest.target_groups:
        Y[group] = np.empty((n, len(cols)))
        g_idx[group] = [positions[c] for c in cols]
    fold = np.empty(n, dtype=np.int64)
    fold_pos = positions[manifest.fold_column]

    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise ParseError(
                f"row {r}: expected {len(header)} cells, got {len(row)}", row=r
            )
        for j, pos in enumerate(f_idx):
            X[r, j] = _parse_float(row[pos], r, manifest.feature_names[j])
        for group, cols in manifest.target_groups:
            mat = Y[group]
            for j, pos in enumerate(g_idx[group]):
                mat[r, j] = _parse_float(row[pos], r, cols[j])
        cell = row[fold_pos]
        try:
            fold[r] = int(cell)
        except ValueError:
            raise ParseError(
                f"row {r}, column {manifest.fold_column!r}: "
                f"cannot parse {cell!r} as an integer fold label",
                row=r, column=manifest.fold_column,
            )

    return Dataset(X=X, Y=Y, fold=fold, manifest=manifest)


def split_holdout(dataset):
    """Split into the CV training part (folds 0..4) and the hold-out part."""
    test_mask = dataset.fold == HOLDOUT_FOLD
    if not test_mask.any():
        raise ValidationError("no hold-out rows (fold == -1) in dataset")
    if test_mask.all():
        raise ValidationError("no training rows (fold in 0..4) in dataset")
    idx = np.arange(dataset.n_records)
    return dataset.take(idx[~test_mask]), dataset.take(idx[test_mask])


def extract_fold(train, k):
    """Hold fold ``k`` out of a training set: returns (fit_part, val_part)."""
    if k not in CV_FOLDS:
        raise ValidationError(f"fold index {k} outside {list(CV_FOLDS)}")
    if (train.fold == HOLDOUT_FOLD).any():
        raise ValidationError(
            "training set still contains hold-out rows; call split_holdout first"
        )
    val_mask = train.fold == k
    if not val_mask.any():
        raise ValidationError(f"validation fold {k} is empty")
    idx = np.arange(train.n_records)
    return train.take(idx[~val_mask]), train.take(idx[val_mask])
