"""Regular bounded uniform partitions of unity and the discretization pair.

The partition is built from tensor-product triangular hats on a lattice
delta * Z^d: psi_i(x) = prod_j max(0, 1 - |x_j - (x_i)_j| / delta).
These sum to one away from the boundary, reproduce linear functions,
and are interpolatory at the centers, which makes every estimate the
construction relies on directly testable.

Two mutually adjoint operators act through a partition Psi:

* discretize (D_Psi): k dx  |->  sum_i (int k psi_i) delta_{x_i},
  a finite discrete measure;
* spline_quasi_interp (Sp_Psi): f |-> sum_i f(x_i) psi_i.
"""

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import GridMismatch
from .sampling import GridFunction, integral
from .weights import eval_weight

_TOL = 1e-9


@dataclass(frozen=True)
class Bupu:
    """Regular hat partition of unity subordinate to a lattice.

    centers sit on lattice_spacing * Z^d restricted to
    [-L + delta, L - delta]^d; each hat is supported in the closed ball
    of radius `size` = delta * sqrt(d) about its center.
    """

    grid: object
    lattice_spacing: float
    step: int                  # lattice_spacing / h
    center_index: tuple        # per-axis grid indices of the centers

    @property
    def dim(self):
        return self.grid.dim

    @property
    def size(self):
        return self.lattice_spacing * np.sqrt(self.grid.dim)

    @property
    def centers_per_axis(self):
        return len(self.center_index)

    @property
    def center_count(self):
        return len(self.center_index) ** self.grid.dim

    @property
    def centers(self):
        """All center positions, shape (count, d), row-major lattice order."""
        ax = self.grid.axis(0)
        pos = ax[np.asarray(self.center_index)]
        cols = np.meshgrid(*([pos] * self.grid.dim), indexing="ij")
        return np.stack([c.ravel() for c in cols], axis=-1)

    def axis_profile(self):
        """Hat values at the 2*step-1 grid offsets covering one support."""
        offsets = np.arange(-self.step + 1, self.step)
        return 1.0 - np.abs(offsets) / self.step

    def tensor_profile(self):
        profile = self.axis_profile()
        return reduce(np.multiply.outer, [profile] * self.grid.dim)

    def windows(self):
        """Yield (center_position, center_multi_index, window_slices)."""
        ax = self.grid.axis(0)
        for multi in itertools.product(self.center_index, repeat=self.grid.dim):
            slices = tuple(slice(c - self.step + 1, c + self.step) for c in multi)
            pos = np.array([ax[c] for c in multi])
            yield pos, multi, slices

    def evaluate_member(self, multi_index):
        """psi_i sampled on the full grid (mainly for tests)."""
        out = np.zeros(self.grid.shape)
        slices = tuple(slice(c - self.step + 1, c + self.step) for c in multi_index)
        out[slices] = self.tensor_profile()
        return GridFunction(self.grid, out)

    def partition_sum(self):
        """sum_i psi_i on the full grid."""
        out = np.zeros(self.grid.shape)
        prof = self.tensor_profile()
        for _, _, slices in self.windows():
            out[slices] += prof
        return GridFunction(self.grid, out)


@dataclass
class DiscreteMeasure:
    """Finite discrete measure sum_i c_i delta_{x_i}.

    nodes: (M, d) float array; coeffs: (M,) complex array.
    """

    nodes: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=float))
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if nodes.size == 0:
            nodes = nodes.reshape(0, max(1, nodes.shape[-1] if nodes.ndim > 1 else 1))
        if len(nodes) != len(coeffs):
            raise ValueError(f"{len(nodes)} nodes but {len(coeffs)} coefficients")
        if len(nodes) > 1:
            order = np.lexsort(nodes.T)
            if np.any(np.all(np.diff(nodes[order], axis=0) == 0.0, axis=1)):
                raise ValueError("measure nodes must be distinct")
        self.nodes = nodes
        self.coeffs = coeffs

    def __len__(self):
        return len(self.coeffs)

    @property
    def dim(self):
        return self.nodes.shape[1]

    def scaled(self, factor):
        return DiscreteMeasure(self.nodes.copy(), factor * self.coeffs)


def build_regular_bupu(grid, lattice_spacing):
    """Hat BUPU with centers on lattice_spacing * Z^d inside the grid.

    lattice_spacing must be a positive integer multiple of the grid
    spacing and at most L/4, so that several hats fit and their centers
    stay `lattice_spacing` away from the boundary.
    """
    if not grid.is_isotropic:
        raise ValueError("partitions of unity require an isotropic grid")
    h, L = grid.h, grid.L
    ratio = lattice_spacing / h
    step = round(ratio)
    if step < 1 or abs(ratio - step) > _TOL * max(1.0, ratio):
        raise ValueError(
            f"lattice spacing {lattice_spacing} is not an integer multiple of the grid spacing {h}"
        )
    if lattice_spacing > L / 4 + _TOL:
        raise ValueError(f"lattice spacing {lattice_spacing} too coarse for half-extent {L}")
    n_side = int(np.floor((L - lattice_spacing) / lattice_spacing + _TOL))
    k_range = np.arange(-n_side, n_side + 1)
    center_index = tuple(int(grid.shape[0] // 2 + k * step) for k in k_range)
    return Bupu(grid, float(lattice_spacing), step, center_index)


def discretize(k, psi):
    """D_Psi applied to the measure k dx: atoms (x_i, int k psi_i).

    Coefficients are grid quadratures h^d sum k psi_i; atoms with
    coefficient exactly zero are dropped, so the active set tracks the
    support of k.
    """
    if k.grid != psi.grid:
        raise GridMismatch("function and partition live on different grids")
    vol = k.grid.cell_volume
    prof = psi.tensor_profile()
    nodes, coeffs = [], []
    for pos, _, slices in psi.windows():
        c = vol * np.sum(k.samples[slices] * prof)
        if c != 0.0:
            nodes.append(pos)
            coeffs.append(c)
    if not nodes:
        return DiscreteMeasure(np.zeros((0, k.grid.dim)), np.zeros(0, dtype=complex))
    return DiscreteMeasure(np.array(nodes), np.array(coeffs))


def measure_norm(mu, w):
    """Weighted total variation sum_i |c_i| w(x_i)."""
    if len(mu) == 0:
        return 0.0
    if w.n != mu.dim:
        raise GridMismatch(f"weight lives on R^{w.n} but nodes are {mu.dim}-dimensional")
    nodes = mu.nodes if w.n > 1 else mu.nodes[:, 0]
    return float(np.sum(np.abs(mu.coeffs) * eval_weight(w, nodes)))


def spline_quasi_interp(f, psi):
    """Sp_Psi f = sum_i f(x_i) psi_i evaluated on the grid."""
    if f.grid != psi.grid:
        raise GridMismatch("function and partition live on different grids")
    out = np.zeros(f.grid.shape, dtype=complex)
    prof = psi.tensor_profile()
    for _, multi, slices in psi.windows():
        out[slices] += f.samples[multi] * prof
    return GridFunction(f.grid, out)


def adjointness_residual(k, f, psi):
    """| [D_Psi k](f) - (k dx)(Sp_Psi f) |, both sides summed independently.

    The identity is exact in exact arithmetic; on the grid the residual
    is pure floating-point noise, contractually <= 1e-10 ||k||_1 ||f||_inf.
    """
    if k.grid != f.grid:
        raise GridMismatch("functions live on different grids")
    mu = discretize(k, psi)
    if len(mu) == 0:
        lhs = 0.0 + 0.0j
    else:
        idx = [f.grid.index_of(node) for node in mu.nodes]
        values = np.array([f.samples[i] for i in idx])
        lhs = np.sum(mu.coeffs * values)
    rhs = integral(GridFunction(k.grid, k.samples * spline_quasi_interp(f, psi).samples))
    return abs(lhs - rhs)
