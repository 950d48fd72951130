"""Concrete invariant norms: weighted L^p, Katsnelson, modulation, Shubin.

Every norm here is translation and modulation invariant up to a
polynomial factor, and sampled functions with rapidly decaying tails
approximate the continuous values at the quadrature accuracy of their
grid.

The short-time Fourier transform uses the pairing
V_g(sigma)(x, y) = <sigma, M_y T_x g> = int sigma(t) g(t-x) e^{-2 pi i y t} dt
(real window g), computed column-wise by centered FFTs over y for each
time shift x.  Modulation norms apply the time-frequency weight
pointwise to |V_g f| and then take the mixed L^p (over x) / L^q (over y)
norm; the window is normalized to unit L^2 norm so that the s = 0
Shubin norm reproduces the plain L^2 norm (Moyal identity).
"""

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import funcspec
from .errors import GridMismatch, NormSpecError
from .sampling import (GridFunction, Grid, centered_fft, fourier, lp_norm,
                       sample, weighted_lp_norm)
from .weights import Weight, eval_weight

DEFAULT_WINDOW = "gaussian(1)"

_STFT_CHUNK = 128


# ---------------------------------------------------------------------------
# Norm descriptors
# ---------------------------------------------------------------------------

def _as_spec(window):
    return funcspec.parse(window)


@dataclass(frozen=True)
class WeightedLp:
    """|| f w ||_{L^p} with a polynomial weight w on R^d."""

    p: float
    weight: Weight


@dataclass(frozen=True)
class Katsnelson:
    """|| f m1 ||_2 + || f^ m2 ||_2 (intersection of L^2_{m1} and F L^2_{m2})."""

    m1: Weight
    m2: Weight


@dataclass(frozen=True)
class Modulation:
    """Mixed-norm modulation space norm of V_g f with weight on R^{2d}."""

    p: float
    q: float
    weight: Weight
    window: object = DEFAULT_WINDOW

    def __post_init__(self):
        object.__setattr__(self, "window", _as_spec(self.window))


@dataclass(frozen=True)
class Shubin:
    """Shubin class Q_s = M^{2,2}_{v_s}; coincides with L^2 at s = 0."""

    s: float
    window: object = DEFAULT_WINDOW

    def __post_init__(self):
        object.__setattr__(self, "window", _as_spec(self.window))

    def as_modulation(self, dim):
        return Modulation(2.0, 2.0, Weight(self.s, 2 * dim), self.window)


@dataclass(frozen=True)
class NormSum:
    """Sum of component norms (intersection-space combinator)."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise NormSpecError("sum of norms needs at least one part")


def norm_id(spec):
    """Canonical text form of a norm descriptor (CSV/report identifier)."""
    def num(v):
        if v == math.inf:
            return "inf"
        return f"{v:g}"

    if isinstance(spec, WeightedLp):
        return f"lp({num(spec.p)},{num(spec.weight.s)})"
    if isinstance(spec, Katsnelson):
        return f"katsnelson({num(spec.m1.s)},{num(spec.m2.s)})"
    if isinstance(spec, Shubin):
        base = f"shubin({num(spec.s)})"
        if spec.window.text != DEFAULT_WINDOW:
            base = f"shubin({num(spec.s)},window={spec.window.text})"
        return base
    if isinstance(spec, Modulation):
        base = f"modulation({num(spec.p)},{num(spec.q)},{num(spec.weight.s)})"
        if spec.window.text != DEFAULT_WINDOW:
            base = base[:-1] + f",window={spec.window.text})"
        return base
    if isinstance(spec, NormSum):
        return "sum(" + ";".join(norm_id(p) for p in spec.parts) + ")"
    raise NormSpecError(f"unknown norm descriptor {spec!r}")


def _split_args(body):
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_norm(text, dim):
    """Parse a norm descriptor such as lp(1,1), shubin(1), katsnelson(1,1),
    modulation(2,2,1), or sum(lp(1,1);lp(2,0)) for a given base dimension."""
    text = text.strip().replace(" ", "")
    if not text:
        raise NormSpecError("empty norm descriptor")
    if "(" not in text or not text.endswith(")"):
        raise NormSpecError(f"malformed norm descriptor '{text}'")
    name, body = text.split("(", 1)
    body = body[:-1]

    def num(tok):
        tok = tok.strip()
        if tok in ("inf", "Inf", "INF"):
            return math.inf
        try:
            return float(tok)
        except ValueError:
            raise NormSpecError(f"expected a number in norm descriptor, got '{tok}'") from None

    if name == "sum":
        return NormSum(tuple(parse_norm(part, dim) for part in _split_args(body)))
    args = body.split(",") if body else []
    window = DEFAULT_WINDOW
    if args and args[-1].startswith("window="):
        window = args[-1][len("window="):]
        args = args[:-1]
    if name == "lp":
        if len(args) != 2:
            raise NormSpecError(f"lp(p,s) takes 2 arguments, got {len(args)}")
        return WeightedLp(num(args[0]), Weight(num(args[1]), dim))
    if name == "katsnelson":
        if len(args) != 2:
            raise NormSpecError(f"katsnelson(s1,s2) takes 2 arguments, got {len(args)}")
        return Katsnelson(Weight(num(args[0]), dim), Weight(num(args[1]), dim))
    if name == "shubin":
        if len(args) != 1:
            raise NormSpecError(f"shubin(s) takes 1 argument, got {len(args)}")
        return Shubin(num(args[0]), window)
    if name == "modulation":
        if len(args) != 3:
            raise NormSpecError(f"modulation(p,q,s) takes 3 arguments, got {len(args)}")
        return Modulation(num(args[0]), num(args[1]), Weight(num(args[2]), 2 * dim), window)
    raise NormSpecError(f"unknown norm '{name}'")


# ---------------------------------------------------------------------------
# STFT
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=16)
def _padded_window(grid, window_text):
    """Window samples zero-embedded into a double-size array per axis.

    g(t - x) for grid-aligned t, x is then the slice starting at
    N_j - x_index per axis.
    """
    g = sample(funcspec.parse(window_text), grid)
    vals = g.samples
    if np.max(np.abs(vals.imag)) > 1e-12 * max(np.max(np.abs(vals)), 1e-300):
        raise ValueError("STFT window must be real-valued")
    real = vals.real
    if not np.any(real):
        raise ValueError("STFT window has zero norm")
    shape = tuple(2 * n for n in grid.shape)
    pad = np.zeros(shape)
    pad[tuple(slice(n // 2, n // 2 + n) for n in grid.shape)] = real
    norm_l2 = math.sqrt(grid.cell_volume * np.sum(real**2))
    return pad, norm_l2


@functools.lru_cache(maxsize=16)
def _radius_sq_cached(grid):
    out = grid.radius_sq()
    out.flags.writeable = False
    return out


def _window_slab(pad, base_shape, x_indices):
    """g(t - x) over the full t-grid for each x multi-index in the list."""
    d = len(base_shape)
    out = np.empty((len(x_indices),) + tuple(base_shape))
    for r, multi in enumerate(x_indices):
        sl = tuple(slice(n - i, 2 * n - i) for n, i in zip(base_shape, multi))
        out[r] = pad[sl]
    return out


def _stft_stream(sigma, window_text, x_strides, chunk=_STFT_CHUNK):
    """Yield (x_multi_indices, V_rows) over chunks of time shifts.

    V_rows has shape (rows, *dual_shape): for each listed x, the STFT
    column over the full dual (frequency) grid.
    """
    grid = sigma.grid
    pad, _ = _padded_window(grid, window_text)
    shape = grid.shape
    counts = [n // s for n, s in zip(shape, x_strides)]
    all_indices = [
        tuple(i * s for i, s in zip(multi, x_strides))
        for multi in np.ndindex(*counts)
    ]
    for start in range(0, len(all_indices), chunk):
        block = all_indices[start:start + chunk]
        slab = _window_slab(pad, shape, block)
        prod = sigma.samples[None, ...] * slab
        rows = centered_fft(prod, grid.spacing)
        yield block, rows


def stft(sigma, g, tf_grid=None):
    """Short-time Fourier transform V_g(sigma) on a time-frequency grid.

    The default tf_grid is the product of the base grid (time shifts x)
    and its dual (frequencies y).  A custom tf_grid may stride either
    part (spacing an integer multiple of the default) but must keep the
    same half-extents; samples are indexed with the x axes first.
    """
    grid = sigma.grid
    d = grid.dim
    window_text = funcspec.parse(g).text
    dual = grid.dual()
    if tf_grid is None:
        tf_grid = Grid(2 * d, grid.spacing + dual.spacing,
                       grid.half_extent + dual.half_extent)
    if tf_grid.dim != 2 * d:
        raise GridMismatch(f"tf grid must be {2 * d}-dimensional, got {tf_grid.dim}")

    def stride_of(spacing, ref_spacing, extent, ref_extent, part):
        if abs(extent - ref_extent) > 1e-9 * ref_extent:
            raise GridMismatch(f"tf grid {part} half-extent {extent} != {ref_extent}")
        ratio = spacing / ref_spacing
        k = round(ratio)
        if k < 1 or abs(ratio - k) > 1e-9:
            raise GridMismatch(f"tf grid {part} spacing must be an integer multiple of {ref_spacing}")
        return k

    x_strides = [stride_of(tf_grid.spacing[j], grid.spacing[j],
                           tf_grid.half_extent[j], grid.half_extent[j], "time")
                 for j in range(d)]
    y_strides = [stride_of(tf_grid.spacing[d + j], dual.spacing[j],
                           tf_grid.half_extent[d + j], dual.half_extent[j], "frequency")
                 for j in range(d)]
    for j in range(d):
        if grid.shape[j] % x_strides[j] or dual.shape[j] % y_strides[j]:
            raise GridMismatch("tf grid stride must divide the number of samples per axis")

    x_shape = tuple(n // s for n, s in zip(grid.shape, x_strides))
    y_sel = tuple(slice(None, None, s) for s in y_strides)
    out = np.empty(x_shape + tuple(n // s for n, s in zip(dual.shape, y_strides)),
                   dtype=complex)
    for block, rows in _stft_stream(sigma, window_text, x_strides):
        for multi, row in zip(block, rows):
            xi = tuple(i // s for i, s in zip(multi, x_strides))
            out[xi] = row[y_sel]
    return GridFunction(tf_grid, out)


# ---------------------------------------------------------------------------
# Norm evaluation
# ---------------------------------------------------------------------------

def _modulation_norm(f, spec, x_stride=1):
    grid = f.grid
    d = grid.dim
    if spec.weight.n != 2 * d:
        raise GridMismatch(
            f"modulation weight lives on R^{spec.weight.n}, expected R^{2 * d}"
        )
    strides = [x_stride] * d
    for j in range(d):
        while grid.shape[j] % strides[j]:
            strides[j] //= 2
        strides[j] = max(strides[j], 1)
    dual = grid.dual()
    _, window_l2 = _padded_window(grid, spec.window.text)
    s = spec.weight.s
    sq_y = _radius_sq_cached(dual)
    dx_vol = grid.cell_volume * float(np.prod(strides))
    dy_vol = dual.cell_volume
    p, q = spec.p, spec.q
    mesh_axes = grid.axes()

    acc = None
    for block, rows in _stft_stream(f, spec.window.text, strides):
        sq_x = np.array([
            sum(mesh_axes[j][multi[j]] ** 2 for j in range(d)) for multi in block
        ])
        wgt = (1.0 + sq_x.reshape((-1,) + (1,) * d) + sq_y[None, ...]) ** (s / 2.0)
        vals = np.abs(rows) * wgt / window_l2
        if p == math.inf:
            part = np.max(vals, axis=0)
            acc = part if acc is None else np.maximum(acc, part)
        else:
            part = np.sum(vals**p, axis=0) * dx_vol
            acc = part if acc is None else acc + part
    if acc is None:
        return 0.0
    inner = acc if p == math.inf else acc ** (1.0 / p)
    if q == math.inf:
        return float(np.max(inner))
    return float((np.sum(inner**q) * dy_vol) ** (1.0 / q))


def norm(f, spec, x_stride=1):
    """Evaluate the norm described by `spec` on a GridFunction.

    x_stride (modulation/Shubin only) coarsens the time-shift lattice of
    the STFT quadrature by an integer factor; the default 1 keeps the
    base grid.  The STFT is smooth in x at the scale of the analysis
    window, so moderate strides change the value only at quadrature
    level.
    """
    if isinstance(spec, WeightedLp):
        return weighted_lp_norm(f, spec.p, spec.weight)
    if isinstance(spec, Katsnelson):
        return (weighted_lp_norm(f, 2, spec.m1)
                + weighted_lp_norm(fourier(f), 2, spec.m2))
    if isinstance(spec, Shubin):
        return _modulation_norm(f, spec.as_modulation(f.grid.dim), x_stride)
    if isinstance(spec, Modulation):
        return _modulation_norm(f, spec, x_stride)
    if isinstance(spec, NormSum):
        return sum(norm(f, part, x_stride) for part in spec.parts)
    raise NormSpecError(f"unknown norm descriptor {spec!r}")


# ---------------------------------------------------------------------------
# Section-5 style diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingReport:
    embeds: bool
    inf_m1: float
    inf_m2: float


def embed_check_L2(m1, m2, grid):
    """Grid proxy for 'both weights bounded away from zero'.

    Reports the infimum of each weight over the grid; embeds is True
    when both stay >= 1e-9.  A decaying weight (s < 0) drives the
    infimum to zero only as the grid half-extent grows, so the verdict
    is grid-relative; for v_s with s >= 0 the infimum is exactly 1.
    """
    threshold = 1e-9
    r2 = _radius_sq_cached(grid)
    infs = []
    for m in (m1, m2):
        if m.n != grid.dim:
            raise GridMismatch(f"weight on R^{m.n} vs grid dimension {grid.dim}")
        vals = (1.0 + r2) ** (m.s / 2.0)
        infs.append(float(np.min(vals)))
    return EmbeddingReport(bool(infs[0] >= threshold and infs[1] >= threshold),
                           infs[0], infs[1])


@dataclass(frozen=True)
class MaxEquivReport:
    min_ratio: float
    max_ratio: float
    sample_count: int


def weight_max_equiv_check(s, sample_count=10_000, seed=0, d=1, box_radius=50.0):
    """Sampled check of v_s(z) / max(v_s(x), v_s(y)) for z = (x, y).

    The ratio is confined to [1, 2^{s/2}] because
    max(|x|, |y|) <= |z| <= |x| + |y| <= 2 max(|x|, |y|).
    """
    if s < 0:
        raise ValueError(f"the max-weight equivalence needs s >= 0, got s={s}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-box_radius, box_radius, size=(sample_count, d))
    y = rng.uniform(-box_radius, box_radius, size=(sample_count, d))
    z2 = np.sum(x * x, axis=1) + np.sum(y * y, axis=1)
    vz = (1.0 + z2) ** (s / 2.0)
    vmax = np.maximum(
        (1.0 + np.sum(x * x, axis=1)) ** (s / 2.0),
        (1.0 + np.sum(y * y, axis=1)) ** (s / 2.0),
    )
    ratio = vz / vmax
    return MaxEquivReport(float(np.min(ratio)), float(np.max(ratio)), sample_count)


def fourier_invariance_defect(f, s, window=DEFAULT_WINDOW):
    """Relative defect | ||f^||_{Q_s} - ||f||_{Q_s} | / ||f||_{Q_s}.

    Shubin classes with the Gaussian window are Fourier invariant; on
    the grid the defect is bounded by the quadrature budget.
    """
    spec = Shubin(s, window)
    nf = norm(f, spec)
    if nf == 0.0:
        raise ValueError("Fourier-invariance defect of the zero function is undefined")
    nhat = norm(fourier(f), spec)
    return abs(nhat - nf) / nf
