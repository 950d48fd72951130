"""Fast deterministic invariant suite behind the `selftest` subcommand.

Each check exercises one cluster of module invariants at a small fixed
configuration (d=1: L=8, h=1/32; d=2: L=4, h=1/4) and returns None on
success or a short failure detail.  Output contains no timings, so two
runs with the same seed are byte-identical.

The `tamper` hook flips the weight exponent negative inside the
submultiplicativity check; the corresponding property then fails, which
is the expected way to watch the harness catch a fault.
"""

import numpy as np

from . import bupu, convolution, operators, pipeline, sampling, spaces, weights

_FAST_GRID = None
_FAST_GRID_2D = None


def _grids():
    global _FAST_GRID, _FAST_GRID_2D
    if _FAST_GRID is None:
        _FAST_GRID = sampling.Grid(1, 1 / 32, 8.0)
        _FAST_GRID_2D = sampling.Grid(2, 1 / 4, 4.0)
    return _FAST_GRID, _FAST_GRID_2D


def _check_weight_algebra(seed, tamper):
    s_probe = -1.0 if tamper == "weight" else 1.0
    w = weights.Weight(s_probe, 1)
    rep = weights.check_submultiplicative(w, 2000, 50.0, seed)
    # bracket weights obey the sharp relaxed bound (4/3)^{s/2}
    bound = (4.0 / 3.0) ** (max(w.s, 0.0) / 2.0) * (1 + 1e-12)
    if rep.worst_ratio > bound:
        return f"worst submultiplicativity ratio {rep.worst_ratio:.6f} exceeds {bound:.6f}"
    if abs(weights.c1_constant(weights.Weight(2.0, 1)) - 2.0) > 1e-12:
        return "c1(v_2) != 2"
    if abs(weights.eval_weight(weights.Weight(2.0, 2), [3.0, 4.0]) - 26.0) > 1e-12:
        return "eval(v_2,(3,4)) != 26"
    return None


def _check_moderateness(seed, tamper):
    rep = weights.check_moderate(weights.Weight(-2.0, 1), weights.Weight(1.0, 1), 2000, 50.0, seed)
    if rep.violations == 0:
        return "v_-2 unexpectedly v_1-moderate on samples"
    rep2 = weights.check_moderate(weights.Weight(0.0, 1), weights.Weight(0.0, 1), 500, 50.0, seed)
    if rep2.worst_ratio != 1.0:
        return "constant weight ratio != 1"
    return None


def _check_fourier(seed, tamper):
    grid, _ = _grids()
    f = sampling.sample("gaussian(1)", grid)
    fh = sampling.fourier(f)
    err = np.max(np.abs(fh.samples - sampling.sample("gaussian(1)", grid.dual()).samples))
    if err > 1e-9:
        return f"gaussian not a fixed point: {err:.2e}"
    if abs(sampling.lp_norm(f) - sampling.lp_norm(fh)) > 1e-9:
        return "Plancherel defect"
    back = sampling.fourier(fh)
    refl = np.exp(-np.pi * grid.axis() ** 2)
    if np.max(np.abs(back.samples - refl)) > 1e-9:
        return "double transform is not reflection"
    return None


def _check_operators(seed, tamper):
    grid, _ = _grids()
    f = sampling.sample("gaussian(1)", grid)
    w1 = weights.Weight(1.0, 1)
    a = operators.translate(operators.translate(f, 0.5), 0.25)
    b = operators.translate(f, 0.75)
    if np.max(np.abs(a.samples - b.samples)) > 1e-12:
        return "translation group law broken"
    m = operators.modulate(f, 2.0)
    if np.max(np.abs(np.abs(m.samples) - np.abs(f.samples))) > 1e-12:
        return "modulation changed the modulus"
    lhs = sampling.weighted_lp_norm(operators.translate(f, 3.0), 1, w1)
    rhs = weights.eval_weight(w1, 3.0) * sampling.weighted_lp_norm(f, 1, w1)
    if lhs > rhs * (1 + 1e-9):
        return "weighted translation bound broken"
    z = operators.TFPoint(1.0, 2.0)
    pf = operators.tf_shift(f, z)
    if abs(sampling.lp_norm(pf) - sampling.lp_norm(f)) > 1e-10:
        return "TF shift not unitary on L^2"
    return None


def _check_compression(seed, tamper):
    grid, _ = _grids()
    g = sampling.sample("gaussian(1)", grid)
    w1 = weights.Weight(1.0, 1)
    base_l1 = sampling.lp_norm(g, 1)
    base_w = sampling.weighted_lp_norm(g, 1, w1)
    for rho in (0.5, 0.25, 0.125):
        c = operators.dilate_compress(g, rho)
        if abs(sampling.lp_norm(c, 1) - base_l1) > 1e-6 * base_l1:
            return f"L1 isometry broken at rho={rho}"
        if sampling.weighted_lp_norm(c, 1, w1) > base_w * (1 + 1e-9):
            return f"weighted non-expansiveness broken at rho={rho}"
    return None


def _check_bupu(seed, tamper):
    grid, _ = _grids()
    psi = bupu.build_regular_bupu(grid, 1.0)
    total = psi.partition_sum()
    ax = grid.axis()
    interior = np.abs(ax) <= grid.L - 1.0 - 1e-9
    if np.max(np.abs(total.samples.real[interior] - 1.0)) > 1e-12:
        return "partition of unity fails on the interior"
    k = sampling.sample("gaussian(1)", grid)
    f = sampling.sample("hat(2)", grid)
    res = bupu.adjointness_residual(k, f, psi)
    lim = 1e-10 * sampling.lp_norm(k, 1) * sampling.weighted_lp_norm(f, np.inf, weights.Weight(0.0, 1))
    if res > lim:
        return f"adjointness residual {res:.2e} above contract {lim:.2e}"
    w1 = weights.Weight(1.0, 1)
    bound = weights.c1_constant(w1) * sampling.weighted_lp_norm(k, 1, w1) * (1 + 1e-10)
    for delta in (1.0, 0.5, 0.25):
        mu = bupu.discretize(k, bupu.build_regular_bupu(grid, delta))
        if bupu.measure_norm(mu, w1) > bound:
            return f"uniform discretization bound broken at delta={delta}"
    return None


def _check_convolution(seed, tamper):
    grid, _ = _grids()
    g1 = sampling.sample("gaussian(1)", grid)
    g2 = sampling.sample("gaussian(2)", grid)
    conv = convolution.convolve(g1, g2)
    target = sampling.sample(f"gaussian({np.sqrt(5):.17g})", grid)
    if np.max(np.abs(conv.samples - target.samples)) > 1e-8:
        return "gaussian semigroup broken"
    sym = convolution.convolve(g2, g1)
    if np.max(np.abs(conv.samples - sym.samples)) > 1e-10:
        return "commutativity broken"
    w1 = weights.Weight(1.0, 1)
    f = sampling.sample("hat(1)|shift(3)", grid)
    h = sampling.sample("hat(1)|shift(-3)", grid)
    prod = convolution.convolve(f, h)
    young = sampling.weighted_lp_norm(f, 1, w1) * sampling.weighted_lp_norm(h, 1, w1)
    if sampling.weighted_lp_norm(prod, 1, w1) > young * (1 + 1e-9):
        return "weighted Young inequality broken"
    fh = sampling.fourier(convolution.convolve(g1, g2))
    prod_hat = sampling.fourier(g1).samples * sampling.fourier(g2).samples
    if np.max(np.abs(fh.samples - prod_hat)) > 1e-8:
        return "Fourier diagonalization broken"
    return None


def _check_mollify(seed, tamper):
    grid, _ = _grids()
    f = sampling.sample("hat(2)", grid)
    g = sampling.sample("gaussian(1)", grid)
    spec = spaces.WeightedLp(1, weights.Weight(1.0, 1))
    errs = [convolution.mollify_error(f, g, 2.0**-k, spec) for k in range(5)]
    if not all(errs[i + 1] <= errs[i] * 1.05 for i in range(len(errs) - 1)):
        return f"mollification errors not decreasing: {errs}"
    return None


def _check_discretized_conv(seed, tamper):
    grid, _ = _grids()
    f = sampling.sample("gaussian(2)", grid)
    g = sampling.sample("gaussian(1)", grid)
    spec = spaces.WeightedLp(1, weights.Weight(1.0, 1))
    errs = []
    for delta in (1.0, 0.5, 0.25):
        psi = bupu.build_regular_bupu(grid, delta)
        errs.append(convolution.discretized_conv_error(g, f, psi, spec))
    if not (errs[2] < errs[1] < errs[0]):
        return f"discretization errors not decreasing: {errs}"
    return None


def _check_spaces(seed, tamper):
    grid, _ = _grids()
    f = sampling.sample("gaussian(1)|shift(1)", grid)
    l2 = sampling.lp_norm(f)
    q0 = spaces.norm(f, spaces.Shubin(0.0))
    if abs(q0 - l2) > 1e-6 * l2:
        return f"Shubin(0) vs L2 defect {abs(q0 - l2) / l2:.2e}"
    rep = spaces.weight_max_equiv_check(2.0, 2000, seed)
    if rep.min_ratio < 1.0 - 1e-12 or rep.max_ratio > 2.0 * (1 + 1e-12):
        return f"max-weight equivalence ratios out of range: {rep}"
    spec = spaces.WeightedLp(1, weights.Weight(1.0, 1))
    g = sampling.sample("hat(2)", grid)
    tri = spaces.norm(f + g, spec)
    if tri > (spaces.norm(f, spec) + spaces.norm(g, spec)) * (1 + 1e-9):
        return "triangle inequality broken"
    if abs(spaces.norm(3.5 * f, spec) - 3.5 * spaces.norm(f, spec)) > 1e-12 * spaces.norm(f, spec):
        return "homogeneity broken"
    return None


def _check_pipeline(seed, tamper):
    grid, _ = _grids()
    f = sampling.sample("hat(2)", grid)
    spec = spaces.WeightedLp(1, weights.Weight(1.0, 1))
    eps = 0.1 * spaces.norm(f, spec)
    approx, report = pipeline.approximate(f, "gaussian(1)", eps, spec)
    if report.e_total > eps:
        return f"pipeline missed the budget: {report.e_total:.3e} > {eps:.3e}"
    slack = report.budget_sum() + 1e-8 * spaces.norm(f, spec)
    if report.e_total > slack:
        return "budget ledger inequality broken"
    if not (0 < approx.rho <= 1 and approx.node_count == len(approx.atoms)):
        return "approximant structure broken"
    return None


def _check_dim2(seed, tamper):
    _, grid2 = _grids()
    f = sampling.sample("gaussian(1)", grid2)
    if abs(sampling.integral(f) - 1.0) > 1e-8:
        return "2-d gaussian mass wrong"
    psi = bupu.build_regular_bupu(grid2, 0.5)
    total = psi.partition_sum()
    mid = tuple(n // 2 for n in grid2.shape)
    if abs(total.samples[mid].real - 1.0) > 1e-12:
        return "2-d partition of unity fails at the center"
    if abs(psi.size - 0.5 * np.sqrt(2)) > 1e-12:
        return "2-d support radius wrong"
    return None


CHECKS = [
    ("weight-algebra", _check_weight_algebra),
    ("weight-moderateness", _check_moderateness),
    ("fourier-conventions", _check_fourier),
    ("shift-operators", _check_operators),
    ("compression-isometry", _check_compression),
    ("bupu-discretization", _check_bupu),
    ("convolution-algebra", _check_convolution),
    ("approximate-identity", _check_mollify),
    ("discretized-convolution", _check_discretized_conv),
    ("invariant-norms", _check_spaces),
    ("pipeline-end-to-end", _check_pipeline),
    ("dim2-smoke", _check_dim2),
]


def run(seed=0, tamper=None):
    """Run all checks; returns (lines, all_ok)."""
    lines, ok = [], True
    for name, fn in CHECKS:
        detail = fn(seed, tamper)
        if detail is None:
            lines.append(f"PASS {name}")
        else:
            ok = False
            lines.append(f"FAIL {name}: {detail}")
    passed = sum(1 for ln in lines if ln.startswith("PASS"))
    lines.append(f"selftest: {passed}/{len(CHECKS)} checks passed (seed={seed})")
    return lines, ok
