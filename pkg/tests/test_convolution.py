import warnings

import numpy as np
import pytest

from shiftdilate import (DiscreteMeasure, GridFunction, SupportOverflowWarning,
                         Weight, WeightedLp, build_regular_bupu, convolve,
                         convolve_measure, discretize, discretized_conv_error,
                         fourier, measure_norm, mollify_error, sample,
                         translate, weighted_lp_norm)

from conftest import assert_close, max_abs

# || gaussian(sqrt 2) - gaussian(1) ||_{L^1}, independent dense quadrature
# (scipy.integrate.quad of the closed-form integrand)
MOLLIFY_RHO1_L1 = 0.332128149963393


class TestConvolve:
    def test_delta_column_identity(self, desk_grid):
        f = sample("gaussian(1)", desk_grid)
        col = np.zeros(desk_grid.shape)
        col[desk_grid.shape[0] // 2] = 1.0 / desk_grid.h
        ident = convolve(f, GridFunction(desk_grid, col))
        assert max_abs(ident.samples - f.samples) < 1e-9

    def test_gaussian_semigroup(self, desk_grid):
        a = sample("gaussian(1)", desk_grid)
        b = sample("gaussian(2)", desk_grid)
        conv = convolve(a, b)
        ref = sample(f"gaussian({float(np.sqrt(5.0))!r})", desk_grid)
        assert max_abs(conv.samples - ref.samples) < 1e-8

    def test_weighted_young(self, desk_grid, v1):
        # supports kept away from the near-origin region where the bracket
        # weight misses exact submultiplicativity
        f = sample("hat(1)|shift(3)", desk_grid)
        g = sample("hat(1)|shift(-5)", desk_grid)
        lhs = weighted_lp_norm(convolve(f, g), 1, v1)
        rhs = weighted_lp_norm(f, 1, v1) * weighted_lp_norm(g, 1, v1)
        assert lhs <= rhs * (1 + 1e-9)

    def test_commutative(self, unit_grid):
        a = sample("gaussian(1)", unit_grid)
        b = sample("hat(2)", unit_grid)
        assert max_abs(convolve(a, b).samples - convolve(b, a).samples) < 1e-10

    def test_pointwise_weighted_domination(self, desk_grid, v1):
        # |f * g| w <= |f| w * |g| w at every node, for the safe probe pair
        f = sample("hat(1)|shift(3)", desk_grid)
        g = sample("hat(1)|shift(4)", desk_grid)
        w_vals = (1.0 + desk_grid.axis() ** 2) ** 0.5
        lhs = np.abs(convolve(f, g).samples) * w_vals
        fa = GridFunction(desk_grid, np.abs(f.samples) * w_vals)
        ga = GridFunction(desk_grid, np.abs(g.samples) * w_vals)
        rhs = convolve(fa, ga).samples.real
        assert np.all(lhs <= rhs + 1e-10)

    def test_fourier_diagonalization(self, desk_grid):
        a = sample("gaussian(1)", desk_grid)
        b = sample("gaussian(2)|shift(1)", desk_grid)
        lhs = fourier(convolve(a, b)).samples
        rhs = fourier(a).samples * fourier(b).samples
        assert max_abs(lhs - rhs) < 1e-8

    def test_support_overflow_warns(self, unit_grid):
        wide = sample("hat(1)|shift(7)", unit_grid)
        with pytest.warns(SupportOverflowWarning):
            convolve(wide, wide)

    def test_2d(self, grid2d):
        a = sample("gaussian(1)", grid2d)
        conv = convolve(a, a)
        ref = sample(f"gaussian({float(np.sqrt(2.0))!r})", grid2d)
        assert max_abs(conv.samples - ref.samples) < 1e-8


class TestConvolveMeasure:
    def test_single_atom_at_origin(self, unit_grid):
        g = sample("gaussian(1)", unit_grid)
        mu = DiscreteMeasure(np.array([[0.0]]), np.array([1.0 + 0j]))
        assert max_abs(convolve_measure(mu, g).samples - g.samples) == 0.0

    def test_single_shifted_atom(self, unit_grid):
        g = sample("gaussian(1)", unit_grid)
        mu = DiscreteMeasure(np.array([[2.0]]), np.array([1.0 + 0j]))
        assert max_abs(convolve_measure(mu, g).samples - translate(g, 2.0).samples) == 0.0

    def test_module_bound(self, desk_grid, v1):
        # || mu * g ||_{1,w} <= || mu ||_{M_w} || g ||_{1,w}; atoms away from
        # the origin so the bracket-weight near-miss cannot bite
        rng = np.random.default_rng(12)
        nodes = np.array([[3.0], [5.0], [-4.0], [7.0]])
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
        mu = DiscreteMeasure(nodes, coeffs)
        g = sample("hat(1)|shift(3)", desk_grid)
        lhs = weighted_lp_norm(convolve_measure(mu, g), 1, v1)
        rhs = measure_norm(mu, v1) * weighted_lp_norm(g, 1, v1)
        assert lhs <= rhs * (1 + 1e-9)

    def test_associativity_with_measures(self, unit_grid):
        # (mu1 * mu2) * f = mu1 * (mu2 * f) for finite discrete measures
        f = sample("gaussian(1)", unit_grid)
        mu1 = DiscreteMeasure(np.array([[1.0], [-2.0]]), np.array([1.0, 0.5j]))
        mu2 = DiscreteMeasure(np.array([[0.5], [1.5]]), np.array([2.0, -1.0]))
        # mu1 * mu2 expanded by hand (nodes are distinct sums)
        nodes, coeffs = [], []
        for n1, c1 in zip(mu1.nodes, mu1.coeffs):
            for n2, c2 in zip(mu2.nodes, mu2.coeffs):
                nodes.append(n1 + n2)
                coeffs.append(c1 * c2)
        mu12 = DiscreteMeasure(np.array(nodes), np.array(coeffs))
        a = convolve_measure(mu12, f)
        b = convolve_measure(mu1, convolve_measure(mu2, f))
        assert max_abs(a.samples - b.samples) < 1e-10


class TestMollify:
    def test_requires_unit_mass(self, unit_grid, v1):
        f = sample("hat(2)", unit_grid)
        g = sample("const(2)|scale(0.001)", unit_grid)
        with pytest.raises(ValueError):
            mollify_error(f, g, 0.5, WeightedLp(1, v1))

    def test_zero_f(self, unit_grid, v1):
        g = sample("gaussian(1)", unit_grid)
        for rho in (1.0, 0.25):
            assert mollify_error(sample("zero", unit_grid), g, rho, WeightedLp(1, v1)) == 0.0

    def test_gaussian_pair_analytic_value(self, desk_grid, v0):
        f = sample("gaussian(1)", desk_grid)
        g = sample("gaussian(1)", desk_grid)
        err = mollify_error(f, g, 1.0, WeightedLp(1, v0))
        # working-grid quadrature of a |.| integrand with off-grid sign
        # crossings: O(h^2)-level agreement with the dense-quadrature value
        assert_close(err, MOLLIFY_RHO1_L1, rel=5e-4)

    def test_decreasing_ladder(self, desk_grid, v1):
        f = sample("gaussian(2)", desk_grid)
        g = sample("gaussian(1)", desk_grid)
        spec = WeightedLp(1, v1)
        errs = [mollify_error(f, g, 2.0**-k, spec) for k in range(5)]
        assert all(b < a for a, b in zip(errs, errs[1:]))


class TestDiscretizedConv:
    def test_psi_shaped_target_ladder(self, unit_grid, v1):
        g = sample("gaussian(1)", unit_grid)
        f = sample("hat(1)", unit_grid)
        spec = WeightedLp(1, v1)
        errs = []
        for delta in (1.0, 0.5, 0.25, 0.125):
            psi = build_regular_bupu(unit_grid, delta)
            errs.append(discretized_conv_error(g, f, psi, spec))
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 0.02 * errs[0] + 1e-12

    def test_gaussian_pair_superconvergence(self, desk_grid, v1):
        # halving delta divides the error by ~4 (linear reproduction of hats)
        g = sample("gaussian(1)", desk_grid)
        f = sample("gaussian(2)", desk_grid)
        spec = WeightedLp(1, v1)
        errs = []
        for delta in (1.0, 0.5, 0.25, 0.125):
            psi = build_regular_bupu(desk_grid, delta)
            errs.append(discretized_conv_error(g, f, psi, spec))
        for a, b in zip(errs, errs[1:]):
            assert b <= 0.75 * a

    def test_module_bound_sanity(self, desk_grid, v1):
        # error <= || g ||_{1,w} * (weighted discretization defect of f),
        # both factors by quadrature
        g = sample("gaussian(1)", desk_grid)
        f = sample("gaussian(2)", desk_grid)
        spec = WeightedLp(1, v1)
        psi = build_regular_bupu(desk_grid, 0.5)
        err = discretized_conv_error(g, f, psi, spec)
        mu = discretize(f, psi)
        defect = measure_norm(mu, v1) + weighted_lp_norm(f, 1, v1)
        assert err <= weighted_lp_norm(g, 1, v1) * defect
