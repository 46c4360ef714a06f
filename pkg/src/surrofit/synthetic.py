"""Latin-hypercube synthetic dataset generator.

Stands in for the proprietary simulation database: inputs are sampled by
Latin hypercube over the configured feature ranges, and the two target
groups are smooth Gaussian-bump profiles whose amplitude, center, and width
are driven by the live (non-dead) features. Dead features never enter the
target construction, so correlation-threshold elimination has a known
ground truth to find.

Target construction (u = features rescaled to [0, 1], t_j = j/(P-1)):

* live features are assigned round-robin to the roles (amplitude, center,
  width); the powers group rotates the assignment by two slots so the two
  groups exercise different feature/role pairings;
* each role signal is z = sum_t (-1)^t (u_t - 0.5) / q over its q members,
  so z is in [-0.5, 0.5];
* current[j] = (1.0 + 1.6 z_amp) * exp(-(t_j - m)^2 / (2 w^2)) + noise,
  with m = 0.5 + 0.4 z_cen and w = 0.16 + 0.14 z_wid;
* powers[j]  = max((1.2 + 1.6 z_amp) * exp(-(t_j - m')^2 / (2 w'^2)) + noise, 0),
  with m' = 0.5 + 0.4 z_cen and w' = 0.14 + 0.12 z_wid.

Noise is i.i.d. Gaussian with standard deviation ``noise_sigma``. Every
random draw flows from the spec's seed in a fixed order (per-feature LHS
permutation and jitter, current noise, powers noise, fold shuffle), so an
identical spec reproduces the dataset bitwise.
"""

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, HOLDOUT_FOLD
from .manifest import default_manifest
from .validation import ValidationError

HOLDOUT_FRACTION = 0.2
N_CV_FOLDS = 5
DEFAULT_DEAD_FEATURES = frozenset({7, 8})
DEFAULT_NOISE_SIGMA = 0.05

_ROLE_AMPLITUDE, _ROLE_CENTER, _ROLE_WIDTH = 0, 1, 2


@dataclass(frozen=True)
class SyntheticSpec:
    n_records: int
    seed: int
    feature_ranges: tuple = None  # defaults to [0, 1]^9
    dead_features: frozenset = DEFAULT_DEAD_FEATURES
    noise_sigma: float = DEFAULT_NOISE_SIGMA
    profile_length: int = 23

    def __post_init__(self):
        ranges = self.feature_ranges
        if ranges is None:
            ranges = tuple((0.0, 1.0) for _ in range(9))
        ranges = tuple((float(lo), float(hi)) for lo, hi in ranges)
        object.__setattr__(self, "feature_ranges", ranges)
        object.__setattr__(self, "dead_features",
                           frozenset(int(i) for i in self.dead_features))
        f = len(ranges)
        if not self.dead_features <= set(range(f)):
            raise ValidationError(
                f"dead_features {sorted(self.dead_features)} outside 0..{f - 1}"
            )
        if len(self.dead_features) >= f:
            raise ValidationError("at least one feature must stay live")
        if self.noise_sigma < 0:
            raise ValidationError("noise_sigma must be nonnegative")
        if self.profile_length < 1:
            raise ValidationError("profile_length must be positive")

    @property
    def n_features(self):
        return len(self.feature_ranges)


def _role_signals(u_live, group_index):
    """Amplitude/center/width signals in [-0.5, 0.5] from the live features."""
    n, n_live = u_live.shape
    signals = np.zeros((3, n))
    members = [[], [], []]
    for j in range(n_live):
        members[(j + 2 * group_index) % 3].append(j)
    for role, cols in enumerate(members):
        if not cols:
            continue
        weights = np.array([(-1.0) ** t / len(cols) for t in range(len(cols))])
        signals[role] = (u_live[:, cols] - 0.5) @ weights
    return signals


def _gauss_profiles(amplitude, center, width, abscissae):
    d = abscissae[None, :] - center[:, None]
    return amplitude[:, None] * np.exp(-d * d / (2.0 * width[:, None] ** 2))


def _fold_labels(n, rng):
    n_test = int(round(HOLDOUT_FRACTION * n))
    labels = np.empty(n, dtype=np.int64)
    labels[:n_test] = HOLDOUT_FOLD
    labels[n_test:] = np.arange(n - n_test) % N_CV_FOLDS
    return labels[rng.permutation(n)]


def generate_synthetic(spec):
    """Generate a Dataset per the module docstring. Deterministic under seed."""
    n = int(spec.n_records)
    if n < 10:
        raise ValidationError(
            f"n_records={n} is too small to form folds (need at least 10)"
        )
    f = spec.n_features
    p = spec.profile_length
    rng = np.random.default_rng(spec.seed)

    # Latin hypercube: each feature occupies its n strata exactly once.
    u = np.empty((n, f))
    for i in range(f):
        strata = rng.permutation(n)
        jitter = rng.random(n)
        u[:, i] = (strata + jitter) / n
    lo = np.array([r[0] for r in spec.feature_ranges])
    hi = np.array([r[1] for r in spec.feature_ranges])
    X = lo + u * (hi - lo)

    live = sorted(set(range(f)) - spec.dead_features)
    u_live = u[:, live]
    abscissae = (np.arange(p) / (p - 1)) if p > 1 else np.zeros(1)

    z = _role_signals(u_live, group_index=0)
    current = _gauss_profiles(
        1.0 + 1.6 * z[_ROLE_AMPLITUDE],
        0.5 + 0.4 * z[_ROLE_CENTER],
        0.16 + 0.14 * z[_ROLE_WIDTH],
        abscissae,
    )
    current = current + rng.normal(0.0, spec.noise_sigma, size=(n, p))

    z = _role_signals(u_live, group_index=1)
    powers = _gauss_profiles(
        1.2 + 1.6 * z[_ROLE_AMPLITUDE],
        0.5 + 0.4 * z[_ROLE_CENTER],
        0.14 + 0.12 * z[_ROLE_WIDTH],
        abscissae,
    )
    powers = np.maximum(powers + rng.normal(0.0, spec.noise_sigma, size=(n, p)),
                        0.0)

    fold = _fold_labels(n, rng)
    manifest = default_manifest(
        n_features=f, profile_length=p, feature_ranges=spec.feature_ranges
    )
    return Dataset(
        X=X,
        Y={"current": current, "powers": powers},
        fold=fold,
        manifest=manifest,
    )
