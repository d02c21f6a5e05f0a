"""
Shifted-Chebyshev polynomial primitives on an interval [a, b].

Polynomials are stored by their coefficients in the shifted basis
T*_k(x; a, b) = T_k((2x - a - b) / (b - a)) and manipulated through
numpy's Chebyshev series class with ``domain=[a, b]``.
"""
import math
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial import chebyshev as cheb

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class Interval:
    """A closed interval [a, b] with a < b."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"Interval endpoints must satisfy a < b: [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def center(self) -> float:
        return 0.5 * (self.a + self.b)

    def to_window(self, x: ArrayLike) -> np.ndarray:
        """Map x from [a, b] to the reference variable on [-1, 1]."""
        return (2.0 * np.asarray(x, dtype=float) - self.a - self.b) / self.length


@dataclass(frozen=True, eq=False)
class Poly:
    """A polynomial held as shifted-Chebyshev coefficients on an interval."""

    coeffs: np.ndarray
    iv: Interval

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        coeffs = cheb.chebtrim(coeffs, tol=0) if coeffs.size > 1 else coeffs
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def constant(cls, value: float, iv: Interval) -> "Poly":
        return cls(np.array([value]), iv)

    @classmethod
    def identity(cls, iv: Interval) -> "Poly":
        """The polynomial x."""
        return cls(np.array([iv.center, 0.5 * iv.length]), iv)

    @classmethod
    def basis(cls, k: int, iv: Interval) -> "Poly":
        """The shifted Chebyshev polynomial T*_k."""
        if k < 0:
            raise ValueError(f"Degree must be non-negative: {k}")
        coeffs = np.zeros(k + 1)
        coeffs[k] = 1.0
        return cls(coeffs, iv)

    @property
    def series(self) -> Chebyshev:
        return Chebyshev(self.coeffs, domain=[self.iv.a, self.iv.b])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0.0

    def _check(self, other: "Poly") -> None:
        if other.iv != self.iv:
            raise ValueError(f"Interval mismatch: {self.iv} vs {other.iv}")

    def __add__(self, other: Union["Poly", float]) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return Poly(cheb.chebadd(self.coeffs, other.coeffs), self.iv)
        return Poly(cheb.chebadd(self.coeffs, [float(other)]), self.iv)

    __radd__ = __add__

    def __sub__(self, other: Union["Poly", float]) -> "Poly":
        return self + (-1.0) * other

    def __mul__(self, other: Union["Poly", float]) -> "Poly":
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return Poly(self.coeffs * float(other), self.iv)

    __rmul__ = __mul__

    def __call__(self, x: ArrayLike) -> Union[float, np.ndarray]:
        return poly_eval(self, x)

    def deriv(self, order: int = 1) -> "Poly":
        p = self
        for _ in range(order):
            p = poly_diff(p)
        return p


def cheb_eval(k: int, x: ArrayLike, iv: Interval) -> Union[float, np.ndarray]:
    """
    Evaluate T*_k(x; a, b).

    Inside [a, b] the trigonometric form is used; outside, the polynomial
    extension is evaluated by Clenshaw's recurrence on the mapped argument.

    Args:
        k (int): Degree, k >= 0
        x (float or array): Evaluation point(s)
        iv (Interval): The interval [a, b]

    Returns:
        float or np.ndarray: T*_k(x)
    """
    if k < 0:
        raise ValueError(f"Degree must be non-negative: {k}")
    t = np.atleast_1d(iv.to_window(x))
    out = np.empty_like(t)
    inside = np.abs(t) <= 1.0
    out[inside] = np.cos(k * np.arccos(t[inside]))
    if np.any(~inside):
        unit = np.zeros(k + 1)
        unit[k] = 1.0
        out[~inside] = cheb.chebval(t[~inside], unit)
    return float(out[0]) if np.ndim(x) == 0 else out


def poly_mul(p: Poly, q: Poly) -> Poly:
    p._check(q)
    return Poly(cheb.chebmul(p.coeffs, q.coeffs), p.iv)


def poly_diff(p: Poly) -> Poly:
    """Differentiate in x; the chain-rule factor 2/(b-a) is included."""
    if p.degree == 0:
        return Poly.constant(0.0, p.iv)
    return Poly(cheb.chebder(p.coeffs, scl=2.0 / p.iv.length), p.iv)


def poly_eval(p: Poly, x: ArrayLike) -> Union[float, np.ndarray]:
    values = cheb.chebval(p.iv.to_window(x), p.coeffs)
    return float(values) if np.ndim(x) == 0 else values


def poly_derivs_at(p: Poly, x: float, order: int) -> List[float]:
    """Return [p(x), p'(x), ..., p^(order)(x)]."""
    values = []
    current = p
    for _ in range(order + 1):
        values.append(poly_eval(current, x))
        current = poly_diff(current)
    return values


def cheb_deriv_at_zero(k: int, q: int, iv: Interval) -> float:
    """
    Closed-form q-th derivative of T*_k at the global point x = 0.

    Uses the terminating hypergeometric representation
    k (-1)^(k-q) q! (k+q-1)! (4/(b-a))^q / ((2q)! (k-q)!) * 2F1(q-k, k+q; q+1/2; a/(a-b)).

    Args:
        k (int): Degree of T*_k
        q (int): Derivative order; orders above k give 0
        iv (Interval): The interval [a, b]

    Returns:
        float: The derivative value
    """
    if q == 0:
        return cheb_eval(k, 0.0, iv)
    if q > k:
        return 0.0
    z = iv.a / (iv.a - iv.b)
    # 2F1 with a non-positive integer numerator parameter terminates after k-q+1 terms
    total, term = 0.0, 1.0
    for n in range(k - q + 1):
        total += term
        term *= (q - k + n) * (k + q + n) / ((q + 0.5 + n) * (n + 1)) * z
    prefactor = (
        k
        * (-1) ** (k - q)
        * math.factorial(q)
        * math.factorial(k + q - 1)
        / (math.factorial(2 * q) * math.factorial(k - q))
    )
    return prefactor * (4.0 / iv.length) ** q * total
