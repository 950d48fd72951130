import numpy as np
import pytest

from shiftdilate import Grid, Weight, sample

# desk-scale configuration used by the acceptance criteria
DESK_H = 1.0 / 64.0
DESK_L = 16.0


@pytest.fixture(scope="session")
def desk_grid():
    return Grid(1, DESK_H, DESK_L)


@pytest.fixture(scope="session")
def unit_grid():
    # smaller grid for fast unit tests (N = 512)
    return Grid(1, 1.0 / 32.0, 8.0)


@pytest.fixture(scope="session")
def grid2d():
    # d=2 smoke scale from the acceptance preamble (N = 128 per axis)
    return Grid(2, 1.0 / 8.0, 8.0)


@pytest.fixture(scope="session")
def v0():
    return Weight(0.0, 1)


@pytest.fixture(scope="session")
def v1():
    return Weight(1.0, 1)


@pytest.fixture(scope="session")
def v2():
    return Weight(2.0, 1)


PROBE_SPECS = [
    "gaussian(1)",
    "gaussian(2)|shift(1)",
    "hat(2)",
    "bspline(3,2)",
    "hat(1)|shift(-3)",
]


@pytest.fixture(scope="session")
def probe_family(unit_grid):
    return [sample(spec, unit_grid) for spec in PROBE_SPECS]


def assert_close(actual, expected, rel=0.0, abs_=0.0, label=""):
    tol = rel * abs(expected) + abs_
    assert abs(actual - expected) <= tol, (
        f"{label}: {actual!r} vs {expected!r} (tol {tol:.3e}, diff {abs(actual - expected):.3e})"
    )


def max_abs(arr):
    return float(np.max(np.abs(arr))) if arr.size else 0.0
