"""Continuous convolution on the grid and its discretized forms.

convolve realizes f * g on R^d by zero-padded FFT (no circular
wraparound) with h^d quadrature scaling, cropped back to the original
grid.  convolve_measure realizes mu * g = sum_i c_i T_{x_i} g as an
exact translate-and-sum, which is the literal shape of the approximant
the density theorem produces.
"""

import warnings

import numpy as np
from scipy.signal import fftconvolve

from . import spaces
from .errors import GridMismatch, SupportOverflowWarning
from .operators import dilate_compress, translate
from .sampling import GridFunction, integral

_OVERFLOW_FRACTION = 1e-6


def convolve(f, g):
    """(f * g)(x) ~ h^d sum_t f(t) g(x - t), zero-padded, cropped to the grid.

    Warns with SupportOverflowWarning when more than 1e-6 of the total
    mass of the full linear convolution falls outside the representable
    window.
    """
    if f.grid != g.grid:
        raise GridMismatch("convolution requires a shared grid")
    full = fftconvolve(f.samples, g.samples, mode="full")
    shape = f.grid.shape
    crop = tuple(slice(n // 2, n // 2 + n) for n in shape)
    out = f.grid.cell_volume * full[crop]
    total = np.sum(np.abs(full))
    if total > 0:
        kept = np.sum(np.abs(full[crop]))
        if total - kept > _OVERFLOW_FRACTION * total:
            warnings.warn(
                f"convolution support leaks {100 * (total - kept) / total:.3g}% of its mass "
                "outside the grid window",
                SupportOverflowWarning,
                stacklevel=2,
            )
    return GridFunction(f.grid, out)


def convolve_measure(mu, g, interpolate=False):
    """mu * g = sum_i c_i T_{x_i} g by exact translate-and-sum."""
    if len(mu) and mu.dim != g.grid.dim:
        raise GridMismatch(f"measure nodes in R^{mu.dim}, grid is {g.grid.dim}-dimensional")
    acc = np.zeros(g.grid.shape, dtype=complex)
    for node, c in zip(mu.nodes, mu.coeffs):
        acc += c * translate(g, node, interpolate=interpolate).samples
    return GridFunction(g.grid, acc)


def mollify_error(f, g, rho, norm_spec):
    """|| S_rho g * f - f || in the requested norm.

    g must be normalized to unit integral (within 1e-8); compressions of
    such a window form an approximate identity as rho -> 0.
    """
    mass = integral(g)
    if abs(mass - 1.0) > 1e-8:
        raise ValueError(f"window must have unit integral, got {mass:.3g}; normalize first")
    g_rho = dilate_compress(g, rho)
    return spaces.norm(convolve(g_rho, f) - f, norm_spec)


def discretized_conv_error(g, f, psi, norm_spec):
    """|| g * f - g * (D_Psi f) || in the requested norm.

    Measures how well replacing one factor by its finite discretization
    preserves the convolution product.
    """
    from .bupu import discretize

    exact = convolve(g, f)
    discrete = convolve_measure(discretize(f, psi), g)
    return spaces.norm(exact - discrete, norm_spec)
