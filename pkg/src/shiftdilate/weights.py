"""Polynomial Beurling and moderate weights on R^n.

The implemented family is v_s(x) = (1 + |x|^2)^(s/2).  For s >= 0 these
are radial, increasing, submultiplicative (Beurling) weights; for
arbitrary real s they are moderate with respect to v_|s|.  Other
submultiplicative weights can be represented behind the same evaluation
interface, but no constructors for them are provided here.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SignalsNotSubmultiplicative

# relative slack for floating-point inequality checks
INEQ_SLACK = 1e-12


@dataclass(frozen=True)
class Weight:
    """The polynomial radial weight v_s(x) = (1 + |x|^2)^(s/2) on R^n.

    Parameters
    ----------
    s : float
        Exponent.  Submultiplicativity requires s >= 0; moderate use
        allows any real s.
    n : int
        Ambient dimension (n = d for spatial weights, n = 2d for
        time-frequency-plane weights).
    """

    s: float
    n: int = 1

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError(f"weight dimension must be a positive integer, got {self.n}")

    @property
    def is_submultiplicative(self):
        return self.s >= 0

    def __call__(self, x):
        return eval_weight(self, x)


def _radius_sq(x, n):
    """|x|^2 for points given as scalars (n=1) or arrays with last axis n."""
    x = np.asarray(x, dtype=float)
    if n == 1:
        if x.ndim and x.shape[-1] == 1:
            x = x[..., 0]
        return x * x
    if x.ndim == 0 or x.shape[-1] != n:
        raise ValueError(f"expected points with last axis of length {n}, got shape {x.shape}")
    return np.sum(x * x, axis=-1)


def eval_weight(w, x):
    """Evaluate v_s at a point or an array of points.

    For n = 1 any array shape is interpreted elementwise; for n >= 2 the
    last axis must have length n and evaluation is vectorized over the
    leading axes.
    """
    return (1.0 + _radius_sq(x, w.n)) ** (w.s / 2.0)


def c1_constant(w, radius=1.0):
    """Maximum of the weight over the closed ball of the given radius.

    For the increasing radial family v_s with s >= 0 this is
    (1 + radius^2)^(s/2), e.g. 2^(s/2) on the unit ball.

    Raises
    ------
    SignalsNotSubmultiplicative
        If w.s < 0 (the bound is meaningful only for Beurling weights).
    """
    if w.s < 0:
        raise SignalsNotSubmultiplicative(
            f"c1_constant needs a submultiplicative weight; got exponent s={w.s}"
        )
    return (1.0 + radius * radius) ** (w.s / 2.0)


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of a sampled two-point inequality check."""

    violations: int
    worst_ratio: float
    pair_count: int


def _sample_pairs(rng, pair_count, box_radius, n):
    shape = (pair_count, n)
    x = rng.uniform(-box_radius, box_radius, size=shape)
    y = rng.uniform(-box_radius, box_radius, size=shape)
    return x, y


def check_submultiplicative(w, pair_count=10_000, box_radius=50.0, seed=0):
    """Sample pairs and test w(x+y) <= w(x) w(y) with relative slack 1e-12.

    Returns an InequalityReport with the number of violations and the
    worst observed ratio w(x+y) / (w(x) w(y)).  The check itself does not
    require s >= 0, so it can also be used to demonstrate failure for a
    non-submultiplicative exponent.
    """
    rng = np.random.default_rng(seed)
    x, y = _sample_pairs(rng, pair_count, box_radius, w.n)
    ratio = eval_weight(w, x + y) / (eval_weight(w, x) * eval_weight(w, y))
    violations = int(np.count_nonzero(ratio > 1.0 + INEQ_SLACK))
    return InequalityReport(violations, float(np.max(ratio)), pair_count)


def check_moderate(m, w, pair_count=10_000, box_radius=50.0, seed=0):
    """Sample pairs and test moderateness m(x+y) <= m(x) w(y).

    Same sampling contract as check_submultiplicative; intended use is
    w = v_|s(m)|.
    """
    if m.n != w.n:
        raise ValueError(f"dimension mismatch: m on R^{m.n}, w on R^{w.n}")
    rng = np.random.default_rng(seed)
    x, y = _sample_pairs(rng, pair_count, box_radius, m.n)
    ratio = eval_weight(m, x + y) / (eval_weight(m, x) * eval_weight(w, y))
    violations = int(np.count_nonzero(ratio > 1.0 + INEQ_SLACK))
    return InequalityReport(violations, float(np.max(ratio)), pair_count)
