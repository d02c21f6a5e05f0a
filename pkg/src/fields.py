"""
Abstract base class and implementations for Caputo right-hand sides g(t, y).
"""
from abc import ABC, abstractmethod
from typing import Callable, Optional

import numpy as np


class VectorField(ABC):
    """Right-hand side of D^alpha y = g(t, y) in R^d."""

    #: True when the Jacobian does not depend on t or y
    constant_jacobian: bool = False

    @property
    @abstractmethod
    def dimension(self) -> int:
        pass

    @abstractmethod
    def evaluate(self, t: float, y: np.ndarray) -> np.ndarray:
        """
        Evaluate the field.

        Args:
            t (float): Time
            y (np.ndarray): State of length d

        Returns:
            np.ndarray: g(t, y)
        """
        pass

    @abstractmethod
    def jacobian(self, t: float, y: np.ndarray) -> np.ndarray:
        """
        Jacobian of the field with respect to y.

        Returns:
            np.ndarray: d x d matrix
        """
        pass

    def evaluate_stages(self, times: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Evaluate g at each (times[i], Y[i]); Y has one row per stage."""
        return np.vstack([self.evaluate(t, y) for t, y in zip(times, Y)])


class CallableField(VectorField):
    """Wrap plain callables; the Jacobian is required for implicit stage solves."""

    def __init__(
        self,
        func: Callable[[float, np.ndarray], np.ndarray],
        jac: Callable[[float, np.ndarray], np.ndarray],
        dimension: int,
        constant_jacobian: bool = False,
    ):
        self._func = func
        self._jac = jac
        self._dimension = dimension
        self.constant_jacobian = constant_jacobian

    @property
    def dimension(self) -> int:
        return self._dimension

    def evaluate(self, t: float, y: np.ndarray) -> np.ndarray:
        return np.atleast_1d(np.asarray(self._func(t, y), dtype=float))

    def jacobian(self, t: float, y: np.ndarray) -> np.ndarray:
        return np.atleast_2d(np.asarray(self._jac(t, y), dtype=float))


def linear_field(A, forcing: Optional[Callable[[float], np.ndarray]] = None) -> CallableField:
    """The affine field g(t, y) = A y + forcing(t)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    d = A.shape[0]

    def func(t, y):
        value = A @ np.atleast_1d(y)
        return value if forcing is None else value + forcing(t)

    return CallableField(func, lambda t, y: A, d, constant_jacobian=True)
