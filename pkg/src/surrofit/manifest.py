"""Column manifest: names and ranges of features, target groups, fold column."""

import json
from dataclasses import dataclass, field

from .validation import ValidationError

DEFAULT_N_FEATURES = 9
DEFAULT_PROFILE_LENGTH = 23
GROUP_CURRENT = "current"
GROUP_POWERS = "powers"


@dataclass(frozen=True)
class Manifest:
    """Names every dataset column and records per-feature bounds.

    ``target_groups`` maps a group name to the ordered list of its profile
    columns; every group must have the same profile length.
    """

    feature_names: tuple = ()
    target_groups: tuple = ()  # ((group_name, (col, ...)), ...)
    fold_column: str = "fold"
    feature_ranges: tuple = ()  # ((lo, hi), ...)

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(
            self,
            "target_groups",
            tuple((g, tuple(cols)) for g, cols in self.target_groups),
        )
        object.__setattr__(
            self,
            "feature_ranges",
            tuple((float(lo), float(hi)) for lo, hi in self.feature_ranges),
        )
        self._validate()

    def _validate(self):
        if len(self.feature_ranges) != len(self.feature_names):
            raise ValidationError("one (lo, hi) range is required per feature")
        all_names = list(self.feature_names)
        lengths = set()
        for group, cols in self.target_groups:
            if len(cols) < 1:
                raise ValidationError(f"target group {group!r} is empty")
            lengths.add(len(cols))
            all_names.extend(cols)
        if len(lengths) > 1:
            raise ValidationError(
                f"target groups have unequal profile lengths: {sorted(lengths)}"
            )
        all_names.append(self.fold_column)
        if len(set(all_names)) != len(all_names):
            dupes = sorted({n for n in all_names if all_names.count(n) > 1})
            raise ValidationError(f"duplicate column names: {dupes}")
        for name, (lo, hi) in zip(self.feature_names, self.feature_ranges):
            if not lo < hi:
                raise ValidationError(
                    f"feature {name!r} has empty range [{lo}, {hi}]"
                )

    @property
    def n_features(self):
        return len(self.feature_names)

    @property
    def profile_length(self):
        return len(self.target_groups[0][1]) if self.target_groups else 0

    @property
    def group_names(self):
        return tuple(g for g, _ in self.target_groups)

    def group_columns(self, group):
        for g, cols in self.target_groups:
            if g == group:
                return cols
        raise ValidationError(
            f"unknown target group {group!r}; have {list(self.group_names)}"
        )

    def to_dict(self):
        return {
            "features": [
                {"name": n, "lo": lo, "hi": hi}
                for n, (lo, hi) in zip(self.feature_names, self.feature_ranges)
            ],
            "targets": [
                {"group": g, "columns": list(cols)}
                for g, cols in self.target_groups
            ],
            "fold_column": self.fold_column,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            features = d["features"]
            targets = d["targets"]
            fold_column = d["fold_column"]
        except KeyError as exc:
            raise ValidationError(f"manifest is missing key {exc}") from exc
        return cls(
            feature_names=tuple(f["name"] for f in features),
            target_groups=tuple(
                (t["group"], tuple(t["columns"])) for t in targets
            ),
            fold_column=fold_column,
            feature_ranges=tuple((f["lo"], f["hi"]) for f in features),
        )


def save_manifest(manifest, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2)
        fh.write("\n")


def load_manifest(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"manifest {path} is not valid JSON: {exc}")
    return Manifest.from_dict(data)


def default_manifest(n_features=DEFAULT_N_FEATURES,
                     profile_length=DEFAULT_PROFILE_LENGTH,
                     feature_ranges=None):
    """Manifest for generated datasets: features x0.., groups current/powers."""
    if feature_ranges is None:
        feature_ranges = tuple((0.0, 1.0) for _ in range(n_features))
    return Manifest(
        feature_names=tuple(f"x{i}" for i in range(n_features)),
        target_groups=(
            (GROUP_CURRENT,
             tuple(f"cur_{j:02d}" for j in range(profile_length))),
            (GROUP_POWERS,
             tuple(f"pow_{j:02d}" for j in range(profile_length))),
        ),
        fold_column="fold",
        feature_ranges=feature_ranges,
    )
