"""Declarative hyperparameter spaces and seeded randomized sampling.

Seed derivation: every random stream in the tuning pipeline comes from
``derive_seed(root, stage, *indices)``, a pure function built on
numpy's SeedSequence. The stage constants below enumerate the pipeline
stages; changing this scheme is a breaking change for reproducibility.
"""

from dataclasses import dataclass

import numpy as np

from .forest import ForestRegressor
from .mlp import MlpRegressor
from .validation import ValidationError

STAGE_SAMPLE = 1   # candidate sampling for one outer fold
STAGE_FIT = 2      # inner-CV model fit: (fold, draw_index, inner_fold)
STAGE_REFIT = 3    # refit of the inner-best candidate on one outer fold
STAGE_FINAL = 4    # final full-train fit


def derive_seed(root, stage, *indices):
    """Deterministic child seed for one pipeline stage."""
    entropy = [int(root), int(stage)] + [int(i) for i in indices]
    return int(np.random.SeedSequence(entropy).generate_state(
        1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class Discrete:
    """Uniform choice from an explicit list of values."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValidationError("discrete list must be nonempty")

    def sample(self, rng):
        value = self.values[int(rng.integers(len(self.values)))]
        return list(value) if isinstance(value, tuple) else value


@dataclass(frozen=True)
class IntRange:
    """Uniform integer from [lo, hi], both ends inclusive."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValidationError(f"empty integer range [{self.lo}, {self.hi}]")

    def sample(self, rng):
        return int(rng.integers(self.lo, self.hi + 1))


@dataclass(frozen=True)
class LogUniform:
    """exp(uniform(log lo, log hi)); requires 0 < lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not 0 < self.lo <= self.hi:
            raise ValidationError(
                f"log-uniform range needs 0 < lo <= hi, got [{self.lo}, {self.hi}]"
            )

    def sample(self, rng):
        return float(np.exp(rng.uniform(np.log(self.lo), np.log(self.hi))))


MODEL_REGISTRY = {
    "forest": ForestRegressor,
    "mlp": MlpRegressor,
}

# Tunable parameter names and the defaults filled into candidates that do
# not sample them. Seeds are derived, never tuned.
MODEL_DEFAULTS = {
    "forest": {
        "n_estimators": 50,
        "max_depth": None,
        "min_samples_split": 2,
        "min_samples_leaf": 1,
        "max_features": "all",
        "bootstrap": True,
    },
    "mlp": {
        "hidden_layers": [100],
        "activation": "relu",
        "learning_rate": 0.01,
        "l2_alpha": 0.0,
        "batch_size": 32,
        "max_epochs": 150,
        "early_stop_patience": 10,
        "validation_fraction": 0.1,
    },
}


@dataclass(frozen=True)
class ParamSpace:
    """Named sampling ranges for one model kind; entry order is the draw
    order, so it is part of the determinism contract."""

    model_kind: str
    entries: tuple  # ((name, Discrete|IntRange|LogUniform), ...)

    def __post_init__(self):
        if self.model_kind not in MODEL_DEFAULTS:
            raise ValidationError(
                f"unknown model kind {self.model_kind!r}; "
                f"have {sorted(MODEL_DEFAULTS)}"
            )
        entries = tuple(self.entries.items()) if isinstance(self.entries, dict) \
            else tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        allowed = set(MODEL_DEFAULTS[self.model_kind])
        for name, _ in entries:
            if name not in allowed:
                raise ValidationError(
                    f"{name!r} is not a tunable parameter of "
                    f"{self.model_kind}; allowed: {sorted(allowed)}"
                )


@dataclass(frozen=True)
class Candidate:
    """One fully specified hyperparameter configuration."""

    model_kind: str
    assignments: dict
    draw_index: int

    def to_dict(self):
        return {
            "model_kind": self.model_kind,
            "assignments": dict(self.assignments),
            "draw_index": self.draw_index,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(model_kind=d["model_kind"], assignments=d["assignments"],
                   draw_index=d["draw_index"])


def sample_candidates(space, n_iter, seed):
    """Draw n_iter independent candidates; duplicates are permitted."""
    if n_iter < 1:
        raise ValidationError("n_iter must be positive")
    rng = np.random.default_rng(int(seed))
    defaults = MODEL_DEFAULTS[space.model_kind]
    out = []
    for i in range(n_iter):
        assignments = dict(defaults)
        for name, dist in space.entries:
            assignments[name] = dist.sample(rng)
        out.append(Candidate(model_kind=space.model_kind,
                             assignments=assignments, draw_index=i))
    return out


def build_model(candidate, seed):
    """Instantiate the candidate's model with a derived fit seed."""
    try:
        cls = MODEL_REGISTRY[candidate.model_kind]
    except KeyError:
        raise ValidationError(f"unknown model kind {candidate.model_kind!r}")
    return cls(**candidate.assignments, seed=seed)


def default_forest_space():
    return ParamSpace("forest", (
        ("n_estimators", IntRange(20, 60)),
        ("max_depth", Discrete((8, 12, 16, None))),
        ("min_samples_leaf", Discrete((1, 2, 4))),
        ("max_features", Discrete(("all", "sqrt", 0.6))),
    ))


def default_mlp_space():
    return ParamSpace("mlp", (
        ("hidden_layers", Discrete(((50,), (100,), (100, 50), (64, 64)))),
        ("activation", Discrete(("relu", "tanh"))),
        ("learning_rate", LogUniform(3e-3, 3e-2)),
        ("l2_alpha", LogUniform(1e-7, 1e-4)),
        ("batch_size", Discrete((32, 64))),
    ))


def default_space(model_kind):
    if model_kind == "forest":
        return default_forest_space()
    if model_kind == "mlp":
        return default_mlp_space()
    raise ValidationError(f"unknown model kind {model_kind!r}")
