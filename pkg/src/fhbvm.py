"""
FHBVM(k, s) integration of Caputo systems D^alpha y = g(t, y) on a mixed mesh.

On every step the solution is expanded in the orthonormal Jacobi basis of
order alpha; the s coefficient blocks gamma_0..gamma_{s-1} solve

    gamma = P_s^T Omega g(t0 + c h, phi + h^alpha I_s gamma),

where phi is the memory of all earlier steps at the quadrature abscissae c.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.special import gamma as gamma_fn

from .errors import MissingHistory, NoConvergence
from .fields import VectorField
from .timegrid import GRADED, MixedMesh, TimeStep
from .weighted_jacobi import FhbvmTables, build_basis, build_tables

logger = logging.getLogger(__name__)

FIXED_POINT = "fixed_point"
BLENDED = "blended"
NEWTON = "newton"
ITERATIONS = ("auto", FIXED_POINT, BLENDED)
# plateau accepted as converged, relative to max(1, ||gamma||)
ROUNDOFF = 100.0 * np.finfo(float).eps


@dataclass(frozen=True)
class SolverConfig:
    k: int = 22
    s: int = 22
    switch_tol: float = 0.1
    iter_atol: float = 1e-14
    iter_rtol: float = 1e-12
    max_iters: int = 100
    iteration: str = "auto"
    newton_fallback: bool = True
    j_switch: float = 2.0

    def __post_init__(self):
        if not self.k >= self.s >= 1:
            raise ValueError(f"Need k >= s >= 1: k={self.k}, s={self.s}")
        if not 0.0 < self.switch_tol < 1.0:
            raise ValueError(f"Switch tolerance must lie in (0, 1): {self.switch_tol}")
        if self.max_iters < 1:
            raise ValueError(f"Iteration cap must be positive: {self.max_iters}")
        if self.iteration not in ITERATIONS:
            raise ValueError(f"Unsupported iteration: {self.iteration}")


@dataclass(frozen=True, eq=False)
class StageCoefficients:
    """The s x d coefficient blocks of one step and how they were obtained."""

    step: int
    gamma: np.ndarray
    method: str = FIXED_POINT
    iterations: int = 0

    def __post_init__(self):
        if not np.all(np.isfinite(self.gamma)):
            raise ValueError(f"Stage coefficients of step {self.step} are not finite")


def _require_history(state, needed: int, what: str):
    if state.solved < needed:
        raise MissingHistory(f"{what} needs {needed} solved steps, only {state.solved} available")


def _history_sum(J: np.ndarray, weights: np.ndarray, G: np.ndarray) -> np.ndarray:
    """sum_l weights[l] * J[l] @ G[l] for J (L, n, s) and G (L, s, d)."""
    return np.einsum("lns,lsd->nd", J * weights[:, None, None], G, optimize=True)


def memory_graded(state, i: int, c=None) -> np.ndarray:
    """
    Memory of graded step i at local abscissae c (quadrature nodes when c is None).

    Args:
        state: Anything exposing mesh, tables, y0, gammas and solved
        i (int): Graded step, 1..v
        c (float or array, optional): Local abscissae in [0, 1]

    Returns:
        np.ndarray: One row per abscissa
    """
    mesh, tables = state.mesh, state.tables
    n = tables.k if c is None else np.atleast_1d(c).size
    base = np.broadcast_to(state.y0, (n, state.y0.size)).copy()
    if i == 1:
        return base
    _require_history(state, i - 1, f"Memory of graded step {i}")
    iota = np.arange(1, i)
    weights = mesh.step_sizes[iota - 1] ** tables.alpha
    if c is None:
        J = tables.graded_J[i - iota - 1]
    else:
        c = np.atleast_1d(np.asarray(c, dtype=float))
        ri = mesh.r ** (i - iota).astype(float)
        args = ((ri - 1.0) / (mesh.r - 1.0))[:, None] + c[None, :] * ri[:, None]
        J = tables.j_values(args.ravel()).reshape(args.shape + (tables.s,))
    return base + _history_sum(J, weights, state.gammas[iota - 1])


def memory_uniform(state, j: int, c=None) -> np.ndarray:
    """Memory of uniform step j (m+1..M); graded history plus uniform history."""
    mesh, tables = state.mesh, state.tables
    m, v, r = mesh.m, mesh.v, mesh.r
    _require_history(state, v + j - 1 - m, f"Memory of uniform step {j}")
    gammas = state.gammas
    alpha = tables.alpha

    graded_weights = mesh.step_sizes**alpha
    later = np.arange(m + 1, j)
    if c is None:
        Jg = tables.cross_J[:, j - 1 - m]
        Ju = tables.uniform_J[j - later - 1]
        n = tables.k
    else:
        c = np.atleast_1d(np.asarray(c, dtype=float))
        n = c.size
        ri = r ** np.arange(v, dtype=float)
        cross = ((j - 1 + c[None, :]) * (r**v - 1.0) - m * (ri[:, None] - 1.0)) / (m * ri[:, None] * (r - 1.0))
        Jg = tables.j_values(cross.ravel()).reshape(cross.shape + (tables.s,))
        args = (j - later).astype(float)[:, None] + c[None, :]
        Ju = tables.j_values(args.ravel()).reshape(args.shape + (tables.s,)) if later.size else np.zeros((0, n, tables.s))

    out = np.broadcast_to(state.y0, (n, state.y0.size)).copy()
    out += _history_sum(Jg, graded_weights, gammas[:v])
    if later.size:
        out += _history_sum(Ju, np.full(later.size, mesh.h**alpha), gammas[v + later - m - 1])
    return out


def memory(state, step: TimeStep, c=None) -> np.ndarray:
    if step.kind == GRADED:
        return memory_graded(state, step.local, c)
    return memory_uniform(state, step.local, c)


def advance(state, step: TimeStep, coeffs: StageCoefficients) -> np.ndarray:
    """Node value at the end of the step; only gamma_0 contributes."""
    phi = memory(state, step, 1.0)[0]
    alpha = state.tables.alpha
    return phi + step.h**alpha * coeffs.gamma[0] / gamma_fn(alpha + 1.0)


def rk_stage_check(system: VectorField, tables: FhbvmTables, step: TimeStep,
                   coeffs: StageCoefficients, phi: np.ndarray) -> float:
    """
    Residual of the Runge-Kutta form of a solved step.

    Returns:
        float: ||Y - phi - h^alpha I_s P_s^T Omega g(t0 + c h, Y)||_inf
    """
    ha = step.h**tables.alpha
    Y = phi + ha * tables.Is_alpha @ coeffs.gamma
    times = step.t_start + step.h * tables.rule.nodes
    G = system.evaluate_stages(times, Y)
    residual = Y - phi - ha * tables.Is_alpha @ (tables.PtOmega @ G)
    return float(np.max(np.abs(residual)))


class FhbvmIntegrator:
    """Steps a vector field through a mixed mesh, keeping every stage coefficient."""

    def __init__(
        self,
        system: VectorField,
        mesh: MixedMesh,
        alpha: float,
        y0,
        config: Optional[SolverConfig] = None,
        tables: Optional[FhbvmTables] = None,
    ):
        """
        Initialize the integrator.

        Args:
            system (VectorField): Right-hand side g(t, y)
            mesh (MixedMesh): Time mesh
            alpha (float): Fractional order
            y0 (array): Initial value
            config (SolverConfig, optional): Solver settings
            tables (FhbvmTables, optional): Precomputed tables for this run
        """
        self.system = system
        self.mesh = mesh
        self.config = config or SolverConfig()
        self.y0 = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
        if self.y0.size != system.dimension:
            raise ValueError(f"Initial value has {self.y0.size} entries, field dimension is {system.dimension}")
        cfg = self.config
        if tables is None:
            basis = build_basis(alpha, cfg.k)
            tables = build_tables(basis, cfg.k, cfg.s, alpha, mesh, cfg.j_switch)
        elif not tables.matches(alpha, cfg.k, cfg.s, mesh):
            raise ValueError(f"Tables do not match alpha={alpha}, k={cfg.k}, s={cfg.s} and the mesh")
        self.tables = tables

        self.PtOmega = tables.PtOmega
        self.Xinv = np.linalg.inv(tables.Xs_alpha)
        self._norm_product = np.linalg.norm(self.PtOmega, np.inf) * np.linalg.norm(tables.Is_alpha, np.inf)
        self._factors: Dict[float, tuple] = {}

        self.gammas = np.zeros((mesh.num_steps, cfg.s, self.y0.size))
        self.node_values = np.zeros((mesh.num_steps + 1, self.y0.size))
        self.node_values[0] = self.y0
        self.stats: List[StageCoefficients] = []
        self.solved = 0

    @property
    def alpha(self) -> float:
        return self.tables.alpha

    def choose_iteration(self, step: TimeStep, J0: np.ndarray) -> str:
        if self.config.iteration != "auto":
            return self.config.iteration
        criterion = step.h**self.alpha * np.linalg.norm(J0, np.inf) * self._norm_product
        return FIXED_POINT if criterion <= self.config.switch_tol else BLENDED

    def _stage_map(self, step: TimeStep, phi: np.ndarray):
        ha = step.h**self.alpha
        times = step.t_start + step.h * self.tables.rule.nodes
        Is = self.tables.Is_alpha

        def G(gamma: np.ndarray) -> np.ndarray:
            return self.PtOmega @ self.system.evaluate_stages(times, phi + ha * Is @ gamma)

        return G

    def _converged(self, delta: float, gamma: np.ndarray, previous: float, it: int) -> bool:
        scale = float(np.max(np.abs(gamma))) if gamma.size else 0.0
        if delta <= max(self.config.iter_atol, self.config.iter_rtol * scale):
            return True
        return it > 2 and delta >= previous and delta <= ROUNDOFF * max(1.0, scale)

    def _fixed_point(self, step: TimeStep, G):
        gamma = np.zeros_like(self.gammas[0])
        previous = math.inf
        delta = math.inf
        for it in range(1, self.config.max_iters + 1):
            new = G(gamma)
            delta = float(np.max(np.abs(new - gamma)))
            gamma = new
            if not math.isfinite(delta):
                break
            if self._converged(delta, gamma, previous, it):
                if delta >= previous:
                    logger.warning(f"Step {step.index}: fixed-point iteration stalled at {delta:.3e}")
                return gamma, it
            previous = delta
        raise NoConvergence(step.index, FIXED_POINT, delta, it)

    def _blended_factor(self, step: TimeStep, J0: np.ndarray):
        key = step.h
        if self.system.constant_jacobian and key in self._factors:
            return self._factors[key]
        psi = np.eye(J0.shape[0]) - step.h**self.alpha * self.tables.rho_s * J0
        factor = lu_factor(psi)
        if self.system.constant_jacobian:
            self._factors[key] = factor
        return factor

    def _blended(self, step: TimeStep, G, J0: np.ndarray):
        factor = self._blended_factor(step, J0)
        rho = self.tables.rho_s
        gamma = np.zeros_like(self.gammas[0])
        previous = math.inf
        delta = math.inf
        for it in range(1, self.config.max_iters + 1):
            theta1 = G(gamma) - gamma
            theta2 = rho * self.Xinv @ theta1
            u = lu_solve(factor, (theta1 - theta2).T).T
            update = lu_solve(factor, (theta2 + u).T).T
            gamma = gamma + update
            delta = float(np.max(np.abs(update)))
            if not math.isfinite(delta):
                break
            if self._converged(delta, gamma, previous, it):
                if delta >= previous:
                    logger.warning(f"Step {step.index}: blended iteration stalled at {delta:.3e}")
                return gamma, it
            previous = delta
        raise NoConvergence(step.index, BLENDED, delta, it)

    def _newton(self, step: TimeStep, G, J0: np.ndarray):
        """Simplified Newton on the full system I - h^alpha X_s (x) g_0'."""
        s, d = self.gammas[0].shape
        K = np.eye(s * d) - step.h**self.alpha * np.kron(self.tables.Xs_alpha, J0)
        factor = lu_factor(K)
        gamma = np.zeros((s, d))
        delta = math.inf
        for it in range(1, self.config.max_iters + 1):
            update = lu_solve(factor, (G(gamma) - gamma).ravel()).reshape(s, d)
            gamma = gamma + update
            delta = float(np.max(np.abs(update)))
            if not math.isfinite(delta):
                break
            if self._converged(delta, gamma, math.inf, it):
                return gamma, it
        raise NoConvergence(step.index, NEWTON, delta, it)

    def solve_stage(self, step: TimeStep) -> StageCoefficients:
        """Solve the coefficient equations of one step."""
        phi = memory(self, step)
        G = self._stage_map(step, phi)
        times0 = step.t_start + step.h * self.tables.rule.nodes[0]
        J0 = self.system.jacobian(times0, phi[0])
        method = self.choose_iteration(step, J0)
        logger.debug(f"Step {step.index} ({step.kind} {step.local}, h={step.h:.3e}): {method} iteration")

        if method == FIXED_POINT:
            gamma, iterations = self._fixed_point(step, G)
        else:
            try:
                gamma, iterations = self._blended(step, G, J0)
            except NoConvergence as e:
                if not self.config.newton_fallback:
                    raise
                logger.warning(f"{e}; retrying with simplified Newton")
                gamma, iterations = self._newton(step, G, J0)
                method = NEWTON
        return StageCoefficients(step=step.index, gamma=gamma, method=method, iterations=iterations)

    def record(self, step: TimeStep, coeffs: StageCoefficients) -> np.ndarray:
        """Append a solved step and return its node value."""
        if step.index != self.solved:
            raise ValueError(f"Steps must be recorded in order: expected {self.solved}, got {step.index}")
        self.gammas[step.index] = coeffs.gamma
        self.solved += 1
        value = advance(self, step, coeffs)
        self.node_values[step.index + 1] = value
        self.stats.append(coeffs)
        return value

    def run(self) -> "DenseSolution":
        for step in self.mesh.steps():
            self.record(step, self.solve_stage(step))
        counts: Dict[str, int] = {}
        for st in self.stats:
            counts[st.method] = counts.get(st.method, 0) + 1
        logger.info(
            f"Integrated {self.mesh.num_steps} steps (alpha={self.alpha}, d={self.y0.size}): "
            + ", ".join(f"{n} {name}" for name, n in sorted(counts.items()))
        )
        return DenseSolution(
            mesh=self.mesh,
            tables=self.tables,
            y0=self.y0,
            gammas=self.gammas.copy(),
            values=self.node_values.copy(),
            stats=list(self.stats),
        )


@dataclass(frozen=True, eq=False)
class DenseSolution:
    mesh: MixedMesh
    tables: FhbvmTables
    y0: np.ndarray
    gammas: np.ndarray
    values: np.ndarray
    stats: List[StageCoefficients] = field(default_factory=list)

    @property
    def solved(self) -> int:
        return self.mesh.num_steps

    @property
    def alpha(self) -> float:
        return self.tables.alpha

    def node_times(self) -> np.ndarray:
        return self.mesh.node_times()

    def node_values(self) -> np.ndarray:
        return self.values

    def evaluate_step(self, index: int, c) -> np.ndarray:
        """sigma(t0 + c h) for every c in [0, 1] on one step; one row per c."""
        step = self.mesh.step(index)
        c = np.clip(np.atleast_1d(np.asarray(c, dtype=float)), 0.0, 1.0)
        phi = memory(self, step, c)
        return phi + step.h**self.alpha * self.tables.frac_int(c) @ self.gammas[index]

    def dense_eval(self, t) -> np.ndarray:
        """
        Evaluate the continuous approximation at time(s) t in [0, T].

        Returns:
            np.ndarray: A d-vector for scalar t, otherwise one row per time
        """
        times = np.atleast_1d(np.asarray(t, dtype=float))
        T = self.mesh.T
        if np.any(times < 0.0) or np.any(times > T * (1.0 + 1e-14)):
            raise ValueError(f"Times must lie in [0, {T}]: [{times.min()}, {times.max()}]")
        nodes = self.node_times()
        out = np.empty((times.size, self.y0.size))
        index = np.minimum(np.searchsorted(nodes, times, side="left") - 1, self.mesh.num_steps - 1)
        out[index < 0] = self.y0
        for i in np.unique(index[index >= 0]):
            sel = np.flatnonzero(index == i)
            step = self.mesh.step(int(i))
            out[sel] = self.evaluate_step(int(i), (times[sel] - step.t_start) / step.h)
        return out[0] if np.ndim(t) == 0 else out


def integrate(
    system: VectorField,
    mesh: MixedMesh,
    config: Optional[SolverConfig] = None,
    alpha: Optional[float] = None,
    y0=None,
    tables: Optional[FhbvmTables] = None,
) -> DenseSolution:
    """
    Integrate D^alpha y = g(t, y) over the mesh.

    For a semi-discrete PDE system alpha and y0 are taken from the system.
    """
    if alpha is None:
        alpha = system.problem.alpha
    if y0 is None:
        y0 = system.y0
    return FhbvmIntegrator(system, mesh, alpha, y0, config, tables).run()


def solve_stage(integrator: FhbvmIntegrator, step: TimeStep) -> StageCoefficients:
    return integrator.solve_stage(step)


def dense_eval(sol: DenseSolution, t) -> np.ndarray:
    return sol.dense_eval(t)
