"""
Collocation of the time-fractional reaction-diffusion problem in the RMCP1 basis.

Substituting u_N(x, t) = Phi(x)^T y(t) into
D^alpha u = u_xx - c(x) u + f(x, t) and collocating at the zeros of T*_{N+1}
gives the Caputo system D^alpha y = A y + Psi^{-1} F(t), y(0) = Psi^{-1} U_0.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import IllConditionedCollocation
from .fields import VectorField
from .polycore import Interval
from .rmcp1 import RobinBC, Rmcp1Basis, build_basis, collocation_points, operational_matrix

logger = logging.getLogger(__name__)

COND_LIMIT = 1e13


@dataclass(frozen=True, eq=False)
class TfrdeProblem:
    """
    D^alpha u = u_xx - c(x) u + f(x, t) on (a, b) x (0, T] with Robin conditions.

    The callables are vectorised in x: c(x), u0(x) and f(x, t), exact(x, t)
    receive an array of points and a scalar time.
    """

    iv: Interval
    T: float
    alpha: float
    bc: RobinBC
    c: Callable[[np.ndarray], np.ndarray]
    f: Callable[[np.ndarray, float], np.ndarray]
    u0: Callable[[np.ndarray], np.ndarray]
    exact: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    name: str = "custom"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"Fractional order must lie in (0, 1): {self.alpha}")
        if not self.T > 0:
            raise ValueError(f"Final time must be positive: {self.T}")
        grid = np.linspace(self.iv.a, self.iv.b, 201)
        if np.min(self.c(grid)) < 0:
            raise ValueError(f"Reaction coefficient c(x) must be non-negative on [{self.iv.a}, {self.iv.b}]")


class SemiDiscreteSystem(VectorField):
    """The affine Caputo system produced by collocation."""

    constant_jacobian = True

    def __init__(self, problem: TfrdeProblem, basis: Rmcp1Basis, nodes: np.ndarray,
                 Psi: np.ndarray, Lambda: np.ndarray, cond: float):
        self.problem = problem
        self.basis = basis
        self.nodes = nodes
        self.Psi = Psi
        self.Lambda = Lambda
        self.cond = cond
        self.psi_factor = lu_factor(Psi)
        self.C_N = np.diag(problem.c(nodes))
        H2, _ = operational_matrix(basis, 2)
        self.A = H2.T + self.solve(Lambda) - self.solve(self.C_N @ Psi)
        self.y0 = self.solve(problem.u0(nodes))

    @property
    def dimension(self) -> int:
        return self.basis.size

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Apply Psi^{-1} using the stored factorisation."""
        return lu_solve(self.psi_factor, rhs)

    def forcing(self, t: float) -> np.ndarray:
        return self.solve(self.problem.f(self.nodes, t))

    def evaluate(self, t: float, y: np.ndarray) -> np.ndarray:
        return self.A @ y + self.forcing(t)

    def evaluate_stages(self, times: np.ndarray, Y: np.ndarray) -> np.ndarray:
        F = np.column_stack([self.problem.f(self.nodes, t) for t in times])
        return Y @ self.A.T + self.solve(F).T

    def jacobian(self, t: float = 0.0, y: Optional[np.ndarray] = None) -> np.ndarray:
        return self.A

    def reconstruct(self, y: np.ndarray, x) -> np.ndarray:
        """u_N(x) = Phi(x)^T y for a coefficient vector y (or one row per time)."""
        return self.basis.eval(x) @ np.asarray(y).T

    def at_nodes(self, y: np.ndarray) -> np.ndarray:
        return self.Psi @ y


def assemble(p: TfrdeProblem, N: int, cond_limit: float = COND_LIMIT) -> SemiDiscreteSystem:
    """
    Assemble the semi-discrete system for truncation degree N.

    Args:
        p (TfrdeProblem): The problem
        N (int): Truncation degree
        cond_limit (float): Largest accepted condition number of Psi

    Returns:
        SemiDiscreteSystem: The system

    Raises:
        IllConditionedCollocation: If Psi is too ill-conditioned
    """
    basis = build_basis(N, p.bc, p.iv)
    nodes = collocation_points(N, p.iv)
    Psi = basis.eval(nodes)
    cond = float(np.linalg.cond(Psi))
    logger.info(f"Collocation matrix for {p.name}, N={N}: condition estimate {cond:.3e}")
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedCollocation(
            f"Collocation matrix condition {cond:.3e} exceeds {cond_limit:.1e} (N={N})"
        )
    _, eta2 = operational_matrix(basis, 2)
    Lambda = np.vstack([eta2(x) for x in nodes])
    return SemiDiscreteSystem(p, basis, nodes, Psi, Lambda, cond)


def vector_field(sys: SemiDiscreteSystem, t: float, y: np.ndarray) -> np.ndarray:
    return sys.evaluate(t, y)


def jacobian(sys: SemiDiscreteSystem) -> np.ndarray:
    return sys.A


def reconstruct(sys: SemiDiscreteSystem, y: np.ndarray, x):
    values = sys.reconstruct(y, x)
    return float(values[0]) if np.ndim(x) == 0 and np.ndim(y) == 1 else values
