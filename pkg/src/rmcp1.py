"""
Robin-modified Chebyshev polynomials of the first kind.

Each basis element is phi_k(x) = (x^2 + A_k x + B_k) T*_k(x; a, b) with
(A_k, B_k) chosen so that phi_k satisfies both Robin conditions. The module
also builds the strictly lower-triangular operational matrix H with
phi' = H phi + eps(x) and the Chebyshev collocation grid.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .errors import BasisDependence, SingularBoundarySystem
from .polycore import Interval, Poly, poly_derivs_at

logger = logging.getLogger(__name__)

BASIS_COND_LIMIT = 1e12


@dataclass(frozen=True)
class RobinBC:
    """Coefficients of sigma0 u(a) + beta0 u_x(a) = 0 and sigma1 u(b) + beta1 u_x(b) = 0."""

    sigma0: float
    sigma1: float
    beta0: float
    beta1: float

    def __post_init__(self):
        if self.sigma0 <= 0 or self.sigma1 <= 0:
            raise ValueError(f"Robin coefficients sigma0, sigma1 must be positive: {self}")
        if self.beta0 > 0 or self.beta1 < 0:
            raise ValueError(f"Robin coefficients need beta0 <= 0 <= beta1: {self}")

    @property
    def is_dirichlet(self) -> bool:
        return self.beta0 == 0 and self.beta1 == 0

    def residuals(self, values_a: Tuple[float, float], values_b: Tuple[float, float]) -> Tuple[float, float]:
        """Robin residuals from (u, u_x) at a and at b."""
        return (
            self.sigma0 * values_a[0] + self.beta0 * values_a[1],
            self.sigma1 * values_b[0] + self.beta1 * values_b[1],
        )


@dataclass(frozen=True, eq=False)
class Rmcp1Basis:
    """The N+1 Robin-adapted basis polynomials and their derivative expansion."""

    iv: Interval
    N: int
    bc: RobinBC
    q_coeffs: Tuple[Tuple[float, float], ...]
    phis: Tuple[Poly, ...]
    H: np.ndarray
    eps: Tuple[Tuple[float, float], ...]

    @property
    def size(self) -> int:
        return self.N + 1

    def eval(self, x) -> np.ndarray:
        """Matrix of phi_k(x_i): one row per point, one column per basis element."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.column_stack([np.asarray(phi(x)) for phi in self.phis])

    def eval_deriv(self, x, order: int = 1) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.column_stack([np.asarray(phi.deriv(order)(x)) for phi in self.phis])

    def remainder(self, x: float) -> np.ndarray:
        """The affine remainder vector eps(x) = e_1 x + e_0."""
        e = np.asarray(self.eps)
        return e[:, 1] * x + e[:, 0]

    def remainder_slope(self) -> np.ndarray:
        return np.asarray(self.eps)[:, 1].copy()


def robin_q_coeffs(k: int, bc: RobinBC, iv: Interval) -> Tuple[float, float]:
    """
    Solve for (A_k, B_k) so that (x^2 + A_k x + B_k) T*_k meets both Robin conditions.

    Args:
        k (int): Basis index
        bc (RobinBC): Boundary coefficients
        iv (Interval): Spatial interval

    Returns:
        Tuple[float, float]: (A_k, B_k)

    Raises:
        SingularBoundarySystem: If the 2x2 system is numerically singular
    """
    t_k = Poly.basis(k, iv)
    rows, rhs = [], []
    for x, sigma, beta in ((iv.a, bc.sigma0, bc.beta0), (iv.b, bc.sigma1, bc.beta1)):
        tv, td = poly_derivs_at(t_k, x, 1)
        # phi = q T, phi' = q' T + q T', q = x^2 + A x + B
        rows.append([sigma * x * tv + beta * (tv + x * td), sigma * tv + beta * td])
        rhs.append(-(sigma * x * x * tv + beta * (2.0 * x * tv + x * x * td)))
    system = np.array(rows)
    det = np.linalg.det(system)
    scale = np.linalg.norm(system[0]) * np.linalg.norm(system[1])
    if abs(det) < 1e-12 * scale:
        raise SingularBoundarySystem(
            f"Robin system for k={k} is singular (det={det:.3e}) with {bc} on [{iv.a}, {iv.b}]"
        )
    A, B = np.linalg.solve(system, np.array(rhs))

    closed = closed_form_q_coeffs(k, bc, iv)
    if closed is not None:
        tol = 1e-8 * max(1.0, abs(A), abs(B))
        if abs(closed[0] - A) > tol or abs(closed[1] - B) > tol:
            logger.warning(
                f"Closed-form Robin coefficients disagree for k={k}: "
                f"solve=({A:.12g}, {B:.12g}) closed=({closed[0]:.12g}, {closed[1]:.12g})"
            )
    return float(A), float(B)


def closed_form_q_coeffs(k: int, bc: RobinBC, iv: Interval):
    """Explicit expressions for (A_k, B_k); None when the common denominator vanishes."""
    a, b = iv.a, iv.b
    L, rhat = b - a, b + a
    s0, s1, b0, b1 = bc.sigma0, bc.sigma1, bc.beta0, bc.beta1
    k2 = k * k
    v = s0 * s1 * L**2 - 4.0 * b0 * b1 * k2 * (k2 + 1) - (2 * k2 + 1) * L * (s1 * b0 - s0 * b1)
    if v == 0:
        return None
    A = (
        2.0 * b0 * (s1 * L * (a + k2 * rhat) + 2.0 * b1 * (k2 + 1) * k2 * rhat)
        - s0 * L * (2.0 * b1 * (b + k2 * rhat) + s1 * L * rhat)
    ) / v
    B = (
        b1 * (a * s0 * L * (-a + 2.0 * b * (k2 + 1)) + 2.0 * b0 * (k2 + 1) * (L**2 - 2.0 * a * b * k2))
        + s1 * b * L * (b0 * (b - 2.0 * a * (k2 + 1)) + a * s0 * L)
    ) / v
    return A, B


def build_basis(N: int, bc: RobinBC, iv: Interval) -> Rmcp1Basis:
    """
    Build the RMCP1 basis of degree N together with H and the affine remainders.

    phi_n' has degree n+1 and is expanded in {1, x, phi_0, ..., phi_{n-1}},
    whose Chebyshev coefficient vectors form an upper-triangular system.

    Args:
        N (int): Truncation degree, N >= 0
        bc (RobinBC): Boundary coefficients
        iv (Interval): Spatial interval

    Returns:
        Rmcp1Basis: The assembled basis
    """
    if N < 0:
        raise ValueError(f"Truncation degree must be non-negative: {N}")
    x = Poly.identity(iv)
    q_coeffs: List[Tuple[float, float]] = []
    phis: List[Poly] = []
    for k in range(N + 1):
        A_k, B_k = robin_q_coeffs(k, bc, iv)
        q_coeffs.append((A_k, B_k))
        q_k = x * x + A_k * x + B_k
        phis.append(q_k * Poly.basis(k, iv))

    H = np.zeros((N + 1, N + 1))
    eps: List[Tuple[float, float]] = []
    for n in range(N + 1):
        size = n + 2
        columns = [Poly.constant(1.0, iv), x] + phis[:n]
        system = np.zeros((size, size))
        for col, p in enumerate(columns):
            system[: len(p.coeffs), col] = p.coeffs
        target = np.zeros(size)
        d_phi = phis[n].deriv()
        target[: len(d_phi.coeffs)] = d_phi.coeffs
        cond = np.linalg.cond(system)
        if not np.isfinite(cond) or cond > BASIS_COND_LIMIT:
            raise BasisDependence(f"Derivative expansion for n={n} is singular (cond={cond:.3e})")
        solution = np.linalg.solve(system, target)
        eps.append((float(solution[0]), float(solution[1])))
        H[n, :n] = solution[2:]

    logger.debug(f"Built RMCP1 basis N={N} on [{iv.a}, {iv.b}] with {bc}")
    return Rmcp1Basis(
        iv=iv,
        N=N,
        bc=bc,
        q_coeffs=tuple(q_coeffs),
        phis=tuple(phis),
        H=H,
        eps=tuple(eps),
    )


def operational_matrix(basis: Rmcp1Basis, m: int) -> Tuple[np.ndarray, Callable[[float], np.ndarray]]:
    """
    Operational matrix of the m-th derivative.

    d^m Phi/dx^m = H^m Phi(x) + eta_m(x) with
    eta_m(x) = sum_{k<m} H^k eps^(m-k-1)(x).

    Args:
        basis (Rmcp1Basis): The basis
        m (int): Derivative order, m >= 1

    Returns:
        Tuple: (H^m, eta_m) where eta_m maps x to an (N+1)-vector
    """
    if m < 1:
        raise ValueError(f"Derivative order must be at least 1: {m}")
    H = basis.H
    Hm = np.linalg.matrix_power(H, m)
    powers = [np.linalg.matrix_power(H, k) for k in range(m)]

    def eta(x: float) -> np.ndarray:
        total = np.zeros(basis.size)
        for k in range(m):
            order = m - k - 1
            if order == 0:
                total += powers[k] @ basis.remainder(x)
            elif order == 1:
                total += powers[k] @ basis.remainder_slope()
        return total

    return Hm, eta


def collocation_points(N: int, iv: Interval) -> np.ndarray:
    """Zeros of T*_{N+1} on [a, b], in decreasing order."""
    if N < 0:
        raise ValueError(f"Truncation degree must be non-negative: {N}")
    k = np.arange(N + 1)
    return 0.5 * (iv.a + iv.b + iv.length * np.cos((2 * k + 1) * math.pi / (2 * (N + 1))))
