"""
Reproductions of the published convergence results.

These runs use the full k = s = 22 integrator and take minutes; select them
with ``pytest -m slow``.
"""
import numpy as np
import pytest

from src.bench import run_case, sanity_bound, solve_case, sweep_spatial
from src.config import RunConfig

pytestmark = pytest.mark.slow


def case(**values):
    return RunConfig(log_file=None, record_timing=False, **values)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.6, 0.9])
def test_example1_uniform_mesh(alpha):
    """Smooth-in-time solution on six uniform steps is resolved to round-off level."""
    report = run_case(case(problem="example1", alpha=alpha, N=10, M=6), write=False)
    assert report.e_inf <= 5e-11
    assert report.e_2 <= 5e-11


@pytest.mark.parametrize("alpha,bound", [(0.6, 1e-12), (0.1, 1e-7)])
def test_example2_graded_start(alpha, bound):
    """The weakly singular solution needs the graded start."""
    report = run_case(case(problem="example2", alpha=alpha, N=8, M=100, m=1, v=15), write=False)
    assert report.e_inf <= bound


@pytest.mark.parametrize("alpha", [0.1, 0.5])
def test_example3_error_is_spatial(alpha):
    """With N = 11 the error sits at the spatial level for every M."""
    errors = [run_case(case(problem="example3", alpha=alpha, N=11, M=M), write=False).e_inf for M in range(2, 7)]
    assert all(1e-10 <= e <= 1e-7 for e in errors)
    assert max(errors) <= 1.1 * min(errors)


def test_example1_spatial_convergence():
    """Errors fall geometrically with N on the finely graded mesh."""
    cfg = case(problem="example1", alpha=0.5, M=200, m=1, v=20, compute_l2=False)
    rows = sweep_spatial(cfg, [3, 5, 7, 9])
    errors = np.array([row["e_inf"] for row in rows])
    assert np.all(np.diff(errors) < 0)
    ratios = errors[1:] / errors[:-1]
    assert float(np.exp(np.mean(np.log(ratios)))) <= 0.3


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_solution_bound(name):
    """|u_N| respects the a priori bound from the data."""
    p, sys, sol, _ = solve_case(case(problem=name, alpha=0.5, N=8, M=10, m=1, v=10))
    assert sanity_bound(sol, sys, p)
