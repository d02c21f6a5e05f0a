"""
Orthonormal Jacobi polynomials for the weight alpha (1 - x)^(alpha - 1) on [0, 1].

Provides the Gauss rule of the family, Riemann-Liouville integrals of the
basis polynomials, the kernel integrals

    J_mu(x) = 1/Gamma(alpha) * int_0^1 (x - tau)^(alpha - 1) P_mu(tau) dtau,  x >= 1,

and the tables of those integrals that a time integrator on a mixed mesh
consumes.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gamma, roots_legendre

from .errors import NonConvergentSeries, ZeroEigenvalue
from .timegrid import MixedMesh

logger = logging.getLogger(__name__)

SERIES_MAX_TERMS = 200
SERIES_TOL = 1e-18
# below this distance from x = 1 the integral is split at the singular point
NEAR_SPLIT = 1e-3
PANEL_POINTS = 24
TABLE_CHUNK = 20000


@dataclass(frozen=True, eq=False)
class AlphaJacobiBasis:
    """
    Three-term recurrence of the orthonormal family.

    sqrt(beta[n+1]) P_{n+1} = (x - diag[n]) P_n - sqrt(beta[n]) P_{n-1}, P_0 = 1.
    """

    alpha: float
    max_degree: int
    diag: np.ndarray
    beta: np.ndarray

    def eval(self, x, count: Optional[int] = None) -> np.ndarray:
        """
        Evaluate P_0..P_{count-1} at x.

        Args:
            x (float or array): Points
            count (int, optional): Number of polynomials (default max_degree + 1)

        Returns:
            np.ndarray: Array of shape (len(x), count)
        """
        count = self.max_degree + 1 if count is None else count
        if count > self.max_degree + 1:
            raise ValueError(f"Requested {count} polynomials but basis holds {self.max_degree + 1}")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty((x.size, count))
        out[:, 0] = 1.0
        if count > 1:
            out[:, 1] = (x - self.diag[0]) / math.sqrt(self.beta[1])
        for n in range(1, count - 1):
            out[:, n + 1] = (
                (x - self.diag[n]) * out[:, n] - math.sqrt(self.beta[n]) * out[:, n - 1]
            ) / math.sqrt(self.beta[n + 1])
        return out


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    k: int
    nodes: np.ndarray
    weights: np.ndarray


def build_basis(alpha: float, max_degree: int) -> AlphaJacobiBasis:
    """
    Recurrence coefficients of the Jacobi (alpha - 1, 0) family mapped to [0, 1].

    Args:
        alpha (float): Order in (0, 1)
        max_degree (int): Highest degree the basis must support

    Returns:
        AlphaJacobiBasis: The orthonormal family, P_0 = 1
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"Fractional order must lie in (0, 1): {alpha}")
    if max_degree < 0:
        raise ValueError(f"Maximum degree must be non-negative: {max_degree}")
    a, b = alpha - 1.0, 0.0
    n = np.arange(max_degree + 1, dtype=float)
    ab = 2.0 * n + a + b
    diag_ref = np.empty(max_degree + 1)
    diag_ref[0] = (b - a) / (a + b + 2.0)
    diag_ref[1:] = (b * b - a * a) / (ab[1:] * (ab[1:] + 2.0))

    n1 = np.arange(1, max_degree + 2, dtype=float)
    ab1 = 2.0 * n1 + a + b
    beta_ref = 4.0 * n1 * (n1 + a) * (n1 + b) * (n1 + a + b) / (ab1**2 * (ab1 + 1.0) * (ab1 - 1.0))

    # x = (1 + xi) / 2; beta[0] is the total mass of the weight
    diag = 0.5 * (1.0 + diag_ref)
    beta = np.concatenate([[1.0], 0.25 * beta_ref])
    return AlphaJacobiBasis(alpha=alpha, max_degree=max_degree, diag=diag, beta=beta)


def gauss_rule(basis: AlphaJacobiBasis, k: int) -> QuadratureRule:
    """Gauss rule with k nodes from the eigenpairs of the Jacobi matrix."""
    if not 1 <= k <= basis.max_degree + 1:
        raise ValueError(f"Rule size must satisfy 1 <= k <= {basis.max_degree + 1}: {k}")
    if k == 1:
        return QuadratureRule(k=1, nodes=basis.diag[:1].copy(), weights=basis.beta[:1].copy())
    nodes, vectors = eigh_tridiagonal(basis.diag[:k], np.sqrt(basis.beta[1:k]))
    weights = basis.beta[0] * vectors[0, :] ** 2
    return QuadratureRule(k=k, nodes=nodes, weights=weights)


def frac_int_matrix(basis: AlphaJacobiBasis, rule: QuadratureRule, c, count: int) -> np.ndarray:
    """
    I^alpha P_mu(c) for every c and mu < count.

    With tau = c t the kernel becomes the weight of the rule, so
    I^alpha P_mu(c) = c^alpha / Gamma(alpha + 1) * sum_i b_i P_mu(c c_i).

    Returns:
        np.ndarray: Shape (len(c), count)
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    points = np.outer(c, rule.nodes)
    values = basis.eval(points.ravel(), count).reshape(c.size, rule.k, count)
    sums = np.einsum("i,nim->nm", rule.weights, values)
    return (c**basis.alpha / gamma(basis.alpha + 1.0))[:, None] * sums


def frac_int_P(basis: AlphaJacobiBasis, rule: QuadratureRule, mu: int, c) -> Union[float, np.ndarray]:
    if not 2 * rule.k - 1 >= mu:
        logger.warning(f"I^alpha P_{mu} with a {rule.k}-point rule is not exact")
    values = frac_int_matrix(basis, rule, c, mu + 1)[:, mu]
    return float(values[0]) if np.ndim(c) == 0 else values


class JFunction:
    """
    Vectorised evaluator of J_mu(x) for mu < count and x >= 1.

    Three regimes:
      * 1 < x < 1 + NEAR_SPLIT: the integral over u = x - tau is written as
        int_0^x - int_0^(x-1) of u^(alpha-1) P(x-u), each exact with the Gauss rule;
      * up to the switch point: composite Gauss-Legendre panels in u growing
        geometrically away from the near-singular end u = x - 1;
      * beyond the switch point: binomial series of the kernel in 1/x with
        exact moments of P_mu.
    """

    def __init__(self, basis: AlphaJacobiBasis, count: int, switch: float = 2.0):
        if count > basis.max_degree + 1:
            raise ValueError(f"Requested {count} polynomials but basis holds {basis.max_degree + 1}")
        self.basis = basis
        self.count = count
        self.switch = switch
        self.alpha = basis.alpha
        self._rule = gauss_rule(basis, count)
        self._gamma = gamma(self.alpha)
        self._gamma1 = gamma(self.alpha + 1.0)
        self._panel_nodes, self._panel_weights = roots_legendre(PANEL_POINTS)
        self._series_weights = self._build_series_weights()

    def _build_series_weights(self) -> np.ndarray:
        # moments int_0^1 tau^m P_mu(tau) dtau by a Gauss-Legendre rule exact to degree 2n-1
        n_points = (SERIES_MAX_TERMS + self.count) // 2 + 2
        xi, w = roots_legendre(n_points)
        tau, w = 0.5 * (xi + 1.0), 0.5 * w
        P = self.basis.eval(tau, self.count)
        powers = tau[:, None] ** np.arange(SERIES_MAX_TERMS)[None, :]
        moments = (w[:, None] * powers).T @ P
        coef = np.empty(SERIES_MAX_TERMS)
        coef[0] = 1.0
        for m in range(1, SERIES_MAX_TERMS):
            coef[m] = coef[m - 1] * (m - self.alpha) / m
        return coef[:, None] * moments

    def __call__(self, x) -> np.ndarray:
        """
        Evaluate J_0..J_{count-1} at every x.

        Returns:
            np.ndarray: Shape (len(x), count)
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x < 1.0 - 1e-12):
            raise ValueError(f"J-function arguments must be >= 1: min {x.min()!r}")
        x = np.maximum(x, 1.0)
        out = np.empty((x.size, self.count))

        at_one = x == 1.0
        out[at_one] = 0.0
        out[at_one, 0] = 1.0 / self._gamma1

        far = x >= self.switch
        if np.any(far):
            try:
                out[far] = self.series(x[far])
            except NonConvergentSeries as e:
                logger.debug(f"J-series fallback to panel quadrature: {e}")
                out[far] = self.panels(x[far])

        split = (~at_one) & (x < 1.0 + NEAR_SPLIT)
        if np.any(split):
            out[split] = self.split(x[split])

        middle = (~at_one) & (~far) & (~split)
        if np.any(middle):
            out[middle] = self.panels(x[middle])
        return out

    def split(self, x: np.ndarray) -> np.ndarray:
        nodes, weights = self._rule.nodes, self._rule.weights
        delta = x - 1.0
        whole = self.basis.eval(np.outer(x, nodes).ravel(), self.count).reshape(x.size, -1, self.count)
        head = self.basis.eval((1.0 + np.outer(delta, nodes)).ravel(), self.count).reshape(x.size, -1, self.count)
        whole = np.einsum("i,nim->nm", weights, whole)
        head = np.einsum("i,nim->nm", weights, head)
        return ((x**self.alpha)[:, None] * whole - (delta**self.alpha)[:, None] * head) / self._gamma1

    def panels(self, x: np.ndarray) -> np.ndarray:
        out = np.empty((x.size, self.count))
        for n, xn in enumerate(x):
            lo = xn - 1.0
            edges = [lo]
            while edges[-1] * 2.0 < xn:
                edges.append(edges[-1] * 2.0)
            edges.append(xn)
            edges = np.asarray(edges)
            left, width = edges[:-1], np.diff(edges)
            u = (left[:, None] + 0.5 * width[:, None] * (self._panel_nodes[None, :] + 1.0)).ravel()
            w = (0.5 * width[:, None] * self._panel_weights[None, :]).ravel()
            tau = np.clip(xn - u, 0.0, 1.0)
            P = self.basis.eval(tau, self.count)
            out[n] = (w * u ** (self.alpha - 1.0)) @ P
        return out / self._gamma

    def series(self, x: np.ndarray) -> np.ndarray:
        x_min = float(np.min(x))
        if x_min <= 1.0:
            raise NonConvergentSeries(f"Kernel series diverges at x={x_min:.6g}")
        bound = np.max(np.abs(self._series_weights)) / (1.0 - 1.0 / x_min)
        n_terms = int(math.ceil(math.log(bound / SERIES_TOL) / math.log(x_min))) + 1
        if n_terms > SERIES_MAX_TERMS:
            raise NonConvergentSeries(
                f"Kernel series needs {n_terms} terms at x={x_min:.6g} (cap {SERIES_MAX_TERMS})"
            )
        out = np.empty((x.size, self.count))
        W = self._series_weights[:n_terms]
        exponents = -np.arange(n_terms, dtype=float)
        for start in range(0, x.size, TABLE_CHUNK):
            xs = x[start:start + TABLE_CHUNK]
            powers = xs[:, None] ** exponents[None, :]
            out[start:start + TABLE_CHUNK] = (xs ** (self.alpha - 1.0))[:, None] * (powers @ W)
        return out / self._gamma


def j_function(basis: AlphaJacobiBasis, mu: int, x, switch: float = 2.0) -> Union[float, np.ndarray]:
    """
    J_mu(x) = 1/Gamma(alpha) int_0^1 (x - tau)^(alpha-1) P_mu(tau) dtau for x >= 1.

    Below 1 + 1e-3 the integral is split into two Gauss-rule pieces. From
    there up to ``switch`` (default 2) it uses geometric Gauss-Legendre panels
    graded toward tau = 1, and beyond ``switch`` the binomial series in 1/x,
    which falls back to the panels if it does not converge.

    Args:
        basis (AlphaJacobiBasis): Basis supplying P_mu
        mu (int): Polynomial degree
        x (float or array): Arguments, all >= 1
        switch (float): Start of the series regime

    Returns:
        float or np.ndarray: J_mu(x)
    """
    values = JFunction(basis, mu + 1, switch)(x)[:, mu]
    return float(values[0]) if np.ndim(x) == 0 else values


def rho_param(Xs_alpha: np.ndarray) -> float:
    """
    Scaling parameter of the blended iteration.

    Returns |mu*| where mu* minimises max_lambda |lambda - |mu||^2 / (2 |mu| |lambda|)
    over the spectrum; ties go to the smallest modulus.
    """
    spectrum = np.linalg.eigvals(np.atleast_2d(Xs_alpha))
    moduli = np.abs(spectrum)
    if np.any(moduli == 0.0):
        raise ZeroEigenvalue("The blended-iteration matrix has a zero eigenvalue")
    objective = np.array([
        np.max(np.abs(spectrum - mod) ** 2 / (2.0 * mod * moduli)) for mod in moduli
    ])
    best = objective.min()
    ties = objective <= best + 1e-12 * max(1.0, best)
    return float(np.min(moduli[ties]))


@dataclass(eq=False)
class FhbvmTables:
    """Rule, coefficient matrices and precomputed kernel integrals for one (alpha, k, s, mesh)."""

    basis: AlphaJacobiBasis
    k: int
    s: int
    rule: QuadratureRule
    Ps: np.ndarray
    Is_alpha: np.ndarray
    Xs_alpha: np.ndarray
    rho_s: float
    T: float
    M: int
    m: int
    v: int
    r: float
    uniform_J: np.ndarray
    graded_J: np.ndarray
    cross_J: np.ndarray
    j_switch: float = 2.0
    _j_eval: Optional[JFunction] = field(default=None, repr=False)

    @property
    def alpha(self) -> float:
        return self.basis.alpha

    @property
    def PtOmega(self) -> np.ndarray:
        """The s x k matrix P_s^T Omega."""
        return (self.Ps * self.rule.weights[:, None]).T

    def j_values(self, x) -> np.ndarray:
        if self._j_eval is None:
            self._j_eval = JFunction(self.basis, self.s, self.j_switch)
        return self._j_eval(x)

    def frac_int(self, c) -> np.ndarray:
        return frac_int_matrix(self.basis, self.rule, c, self.s)

    def matches(self, alpha: float, k: int, s: int, mesh: MixedMesh) -> bool:
        return (
            self.alpha == alpha and self.k == k and self.s == s and self.T == mesh.T
            and self.M == mesh.M and self.m == mesh.m and self.v == mesh.v
        )


def core_matrices(basis: AlphaJacobiBasis, k: int, s: int):
    """Rule, P_s, I_s^alpha, X_s^alpha and rho_s."""
    rule = gauss_rule(basis, k)
    Ps = basis.eval(rule.nodes, s)
    Is = frac_int_matrix(basis, rule, rule.nodes, s)
    Xs = (Ps * rule.weights[:, None]).T @ Is
    return rule, Ps, Is, Xs, rho_param(Xs)


def uniform_arguments(nodes: np.ndarray, M: int, m: int) -> np.ndarray:
    j = np.arange(1, max(M - m - 1, 0) + 1, dtype=float)
    return j[:, None] + nodes[None, :]


def graded_arguments(nodes: np.ndarray, v: int, r: float) -> np.ndarray:
    ri = r ** np.arange(1, v, dtype=float)
    return ((ri - 1.0) / (r - 1.0))[:, None] + nodes[None, :] * ri[:, None]


def cross_arguments(nodes: np.ndarray, M: int, m: int, v: int, r: float) -> np.ndarray:
    ri = r ** np.arange(v, dtype=float)
    j = np.arange(m, M, dtype=float)
    rv = r**v - 1.0
    numerator = (j[None, :, None] + nodes[None, None, :]) * rv - m * (ri[:, None, None] - 1.0)
    return numerator / (m * ri[:, None, None] * (r - 1.0))


def build_tables(
    basis: AlphaJacobiBasis, k: int, s: int, alpha: float, mesh: MixedMesh, j_switch: float = 2.0
) -> FhbvmTables:
    """
    Precompute every kernel integral the integrator needs on this mesh.

    Args:
        basis (AlphaJacobiBasis): Basis of order alpha supporting degree >= k
        k (int): Quadrature points
        s (int): Number of basis polynomials, s <= k
        alpha (float): Fractional order (must equal basis.alpha)
        mesh (MixedMesh): The time mesh
        j_switch (float): Argument above which the kernel series is used

    Returns:
        FhbvmTables: The tables
    """
    if not 1 <= s <= k:
        raise ValueError(f"Need 1 <= s <= k: s={s}, k={k}")
    if basis.alpha != alpha:
        raise ValueError(f"Basis order {basis.alpha} does not match alpha={alpha}")
    rule, Ps, Is, Xs, rho = core_matrices(basis, k, s)
    j_eval = JFunction(basis, s, j_switch)

    def tabulate(arguments: np.ndarray) -> np.ndarray:
        if arguments.size == 0:
            return np.zeros(arguments.shape + (s,))
        return j_eval(arguments.ravel()).reshape(arguments.shape + (s,))

    nodes = rule.nodes
    uniform_J = tabulate(uniform_arguments(nodes, mesh.M, mesh.m))
    graded_J = tabulate(graded_arguments(nodes, mesh.v, mesh.r))
    cross_J = tabulate(cross_arguments(nodes, mesh.M, mesh.m, mesh.v, mesh.r))
    logger.info(
        f"Built kernel tables alpha={alpha} k={k} s={s}: "
        f"{uniform_J.shape[0]} uniform, {graded_J.shape[0]} graded, "
        f"{cross_J.shape[0]}x{cross_J.shape[1]} cross entries, rho={rho:.6g}"
    )
    return FhbvmTables(
        basis=basis, k=k, s=s, rule=rule, Ps=Ps, Is_alpha=Is, Xs_alpha=Xs, rho_s=rho,
        T=mesh.T, M=mesh.M, m=mesh.m, v=mesh.v, r=mesh.r,
        uniform_J=uniform_J, graded_J=graded_J, cross_J=cross_J,
        j_switch=j_switch, _j_eval=j_eval,
    )
