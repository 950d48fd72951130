"""Translation, modulation, compression, and time-frequency shifts.

Translation uses zero-extension semantics (functions on R^d, not the
torus): samples shifted past the boundary are lost and the vacated
region is filled with zeros.  Grid-aligned shifts are exact; off-grid
shifts require interpolate=True and use linear interpolation.

Compression S_rho g = rho^-d g(./rho) resamples from the symbolic spec
whenever the function carries one (exact), falling back to linear
interpolation otherwise (flagged on the result).
"""

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import OffGridShift
from .sampling import GridFunction

_ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class TFPoint:
    """A point z = (x, y) of the time-frequency plane R^d x R^d."""

    x: tuple
    y: tuple

    def __init__(self, x, y):
        x = tuple(float(v) for v in np.atleast_1d(x))
        y = tuple(float(v) for v in np.atleast_1d(y))
        if len(x) != len(y):
            raise ValueError(f"time and frequency parts disagree: {len(x)} vs {len(y)}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def dim(self):
        return len(self.x)


def _as_vector(x, dim, name="shift"):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size == 1 and dim > 1:
        x = np.full(dim, x.item())
    if x.size != dim:
        raise ValueError(f"{name} has {x.size} components, expected {dim}")
    return x


def _integer_steps(x, grid):
    """Per-axis integer sample shifts, or None if any axis is off-grid."""
    steps = []
    for j, v in enumerate(x):
        h = grid.spacing[j]
        k = v / h
        ki = round(k)
        if abs(k - ki) > _ALIGN_TOL:
            return None
        steps.append(int(ki))
    return steps


def _shift_samples(samples, steps):
    out = samples
    for axis, m in enumerate(steps):
        if m == 0:
            continue
        out = np.roll(out, m, axis=axis)
        idx = [slice(None)] * out.ndim
        idx[axis] = slice(0, m) if m > 0 else slice(m, None)
        out = out.copy()
        out[tuple(idx)] = 0.0
    return out


def _interp_at(f, positions):
    """Linear interpolation of f at the given positions, zero outside.

    positions: array of shape (*batch, d) in physical coordinates.
    """
    grid = f.grid
    coords = np.empty((grid.dim,) + positions.shape[:-1])
    for j in range(grid.dim):
        coords[j] = (positions[..., j] + grid.half_extent[j]) / grid.spacing[j]
    re = map_coordinates(f.samples.real, coords, order=1, mode="constant", cval=0.0)
    im = map_coordinates(f.samples.imag, coords, order=1, mode="constant", cval=0.0)
    return re + 1j * im


def translate(f, x, interpolate=False):
    """T_x f = f(. - x), zero-extended at the boundary.

    x must be grid-aligned per axis unless interpolate=True, in which
    case values at off-grid source points are linearly interpolated.
    """
    x = _as_vector(x, f.grid.dim)
    steps = _integer_steps(x, f.grid)
    new_spec = f.spec.shifted(x) if f.spec is not None else None
    if steps is not None:
        out = _shift_samples(f.samples, steps)
        return GridFunction(f.grid, out, spec=new_spec,
                            from_interpolation=f.from_interpolation)
    if not interpolate:
        raise OffGridShift(
            f"shift {tuple(x)} is not a multiple of the grid spacing; pass interpolate=True"
        )
    positions = f.grid.mesh() - x
    out = _interp_at(f, positions)
    return GridFunction(f.grid, out, spec=new_spec, from_interpolation=True)


def modulate(f, y):
    """M_y f = exp(2 pi i y.x) f(x)."""
    y = _as_vector(y, f.grid.dim, "modulation")
    phase = np.zeros(f.grid.shape)
    for j, ax in enumerate(f.grid.axes()):
        sl = [None] * f.grid.dim
        sl[j] = slice(None)
        phase = phase + (y[j] * ax)[tuple(sl)]
    return GridFunction(f.grid, f.samples * np.exp(2j * np.pi * phase),
                        from_interpolation=f.from_interpolation)


def dilate_compress(g, rho):
    """Mass-preserving compression S_rho g = rho^-d g(./rho).

    Resamples from g.spec when available (exact); otherwise linearly
    interpolates the stored samples and flags the result.
    """
    if rho <= 0:
        raise ValueError(f"compression factor must be positive, got {rho}")
    if rho == 1.0:
        return g
    if g.spec is not None:
        new_spec = g.spec.compressed(rho)
        values = new_spec(g.grid.mesh())
        return GridFunction(g.grid, values, spec=new_spec)
    positions = g.grid.mesh() / rho
    out = rho ** (-g.grid.dim) * _interp_at(g, positions)
    return GridFunction(g.grid, out, from_interpolation=True)


def tf_shift(f, z, interpolate=False):
    """pi(z) f = M_y T_x f for z = (x, y)."""
    if not isinstance(z, TFPoint):
        z = TFPoint(*z)
    if z.dim != f.grid.dim:
        raise ValueError(f"TF point lives on R^{2 * z.dim}, grid dimension is {f.grid.dim}")
    return modulate(translate(f, z.x, interpolate=interpolate), z.y)


def empirical_opnorm(op, norm, probes):
    """Largest observed ratio ||op(f)|| / ||f|| over the probe set.

    A certified lower bound for the operator norm.  `norm` is either a
    callable GridFunction -> float or a NormSpec instance.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("probe set is empty")
    if callable(norm):
        norm_fn = norm
    else:
        from . import spaces

        norm_fn = lambda f: spaces.norm(f, norm)  # noqa: E731
    best = 0.0
    for f in probes:
        nf = norm_fn(f)
        if nf == 0.0:
            raise ValueError("probe with zero norm")
        best = max(best, norm_fn(op(f)) / nf)
    return best
