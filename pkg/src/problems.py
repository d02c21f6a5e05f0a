"""
Registry of benchmark problems with closed-form solutions.
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Dict

import numpy as np

from .mlf import MlfParams
from .polycore import Interval
from .rmcp1 import RobinBC
from .spacedisc import TfrdeProblem

logger = logging.getLogger(__name__)


def _bump(x: np.ndarray) -> np.ndarray:
    return x**2 * (1.0 - x) ** 2


def example1(alpha: float, T: float = 1.0) -> TfrdeProblem:
    """Smooth in time: u = x^2 (1-x)^2 e^x t^(alpha+2), c = 2x + 1."""
    g3 = math.gamma(alpha + 3.0)

    def f(x, t):
        x = np.asarray(x, dtype=float)
        w = _bump(x)
        # (w e^x)'' = (x^4 + 6x^3 + x^2 - 8x + 2) e^x
        curvature = x**4 + 6.0 * x**3 + x**2 - 8.0 * x + 2.0
        ta = t ** (alpha + 2.0)
        return np.exp(x) * (0.5 * g3 * w * t**2 - curvature * ta + (2.0 * x + 1.0) * w * ta)

    return TfrdeProblem(
        iv=Interval(0.0, 1.0),
        T=T,
        alpha=alpha,
        bc=RobinBC(sigma0=1.0, sigma1=1.0, beta0=-2.0, beta1=2.0),
        c=lambda x: 2.0 * np.asarray(x, dtype=float) + 1.0,
        f=f,
        u0=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        exact=lambda x, t: _bump(np.asarray(x, dtype=float)) * np.exp(x) * t ** (alpha + 2.0),
        name="example1",
    )


def example2(alpha: float, T: float = 1.0) -> TfrdeProblem:
    """Weak singularity at t = 0: u = -0.05 E_alpha(-t^alpha) sin x on (pi/4, 3pi/4)."""
    e_alpha = MlfParams(alpha)

    @lru_cache(maxsize=4096)
    def relaxation(t: float) -> float:
        return e_alpha(-(t**alpha)) if t > 0 else 1.0

    def exact(x, t):
        return -0.05 * relaxation(float(t)) * np.sin(x)

    def f(x, t):
        x = np.asarray(x, dtype=float)
        return -0.05 * relaxation(float(t)) * (x - math.pi / 4.0) * np.sin(x)

    return TfrdeProblem(
        iv=Interval(math.pi / 4.0, 3.0 * math.pi / 4.0),
        T=T,
        alpha=alpha,
        bc=RobinBC(sigma0=1.0, sigma1=1.0, beta0=-1.0, beta1=1.0),
        c=lambda x: np.asarray(x, dtype=float) - math.pi / 4.0,
        f=f,
        u0=lambda x: -0.05 * np.sin(x),
        exact=exact,
        name="example2",
    )


def example3(alpha: float, T: float = 1.0) -> TfrdeProblem:
    """Homogeneous Dirichlet, no reaction: u = t^2 sin(2 pi x)."""
    g3 = math.gamma(3.0 - alpha)

    def f(x, t):
        return np.sin(2.0 * math.pi * np.asarray(x, dtype=float)) * (
            2.0 * t ** (2.0 - alpha) / g3 + 4.0 * math.pi**2 * t**2
        )

    return TfrdeProblem(
        iv=Interval(0.0, 1.0),
        T=T,
        alpha=alpha,
        bc=RobinBC(sigma0=1.0, sigma1=1.0, beta0=0.0, beta1=0.0),
        c=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        f=f,
        u0=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        exact=lambda x, t: t**2 * np.sin(2.0 * math.pi * np.asarray(x, dtype=float)),
        name="example3",
    )


def zero(alpha: float, T: float = 1.0) -> TfrdeProblem:
    """Example 1 boundary data with no forcing and no initial datum."""
    base = example1(alpha, T)
    nothing = lambda x, t=None: np.zeros_like(np.asarray(x, dtype=float))  # noqa: E731
    return TfrdeProblem(
        iv=base.iv, T=T, alpha=alpha, bc=base.bc, c=base.c,
        f=nothing, u0=nothing, exact=nothing, name="zero",
    )


PROBLEMS: Dict[str, Callable[..., TfrdeProblem]] = {
    "example1": example1,
    "example2": example2,
    "example3": example3,
    "zero": zero,
}


def problem(problem_id: str, alpha: float, T: float = 1.0) -> TfrdeProblem:
    """
    Look up a benchmark problem.

    Args:
        problem_id (str): One of example1, example2, example3, zero
        alpha (float): Fractional order
        T (float): Final time

    Returns:
        TfrdeProblem: The problem

    Raises:
        ValueError: If the id is unknown
    """
    try:
        factory = PROBLEMS[problem_id]
    except KeyError:
        raise ValueError(f"Unsupported problem: {problem_id}")
    logger.debug(f"Creating problem {problem_id} with alpha={alpha}, T={T}")
    return factory(alpha, T)
