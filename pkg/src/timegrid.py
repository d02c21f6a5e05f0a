"""
Mixed graded/uniform time mesh.

The interval [0, m h] is covered by v geometrically growing steps
h_i = r^(i-1) h_1, followed by the uniform nodes t_j = j h, j = m..M.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List

import numpy as np

from .errors import GradedUnderflow

logger = logging.getLogger(__name__)

GRADED = "graded"
UNIFORM = "uniform"


@dataclass(frozen=True)
class TimeStep:
    """One step of the mesh: global index, phase, index within the phase, start time, size."""

    index: int
    kind: str
    local: int
    t_start: float
    h: float

    @property
    def t_end(self) -> float:
        return self.t_start + self.h


@dataclass(frozen=True, eq=False)
class MixedMesh:
    T: float
    M: int
    m: int
    v: int
    r: float
    h: float
    h1: float
    graded_nodes: np.ndarray
    uniform_nodes: np.ndarray
    step_sizes: np.ndarray

    @property
    def num_steps(self) -> int:
        return self.v + self.M - self.m

    def node_times(self) -> np.ndarray:
        """All mesh nodes 0 = t_0 < ... < T, graded phase first."""
        return np.concatenate([self.graded_nodes, self.uniform_nodes[1:]])

    def steps(self) -> Iterator[TimeStep]:
        for i in range(1, self.v + 1):
            yield TimeStep(i - 1, GRADED, i, float(self.graded_nodes[i - 1]), float(self.step_sizes[i - 1]))
        for j in range(self.m + 1, self.M + 1):
            yield TimeStep(self.v + j - self.m - 1, UNIFORM, j, float(self.uniform_nodes[j - 1 - self.m]), self.h)

    def step(self, index: int) -> TimeStep:
        if not 0 <= index < self.num_steps:
            raise ValueError(f"Step index out of range: {index}")
        if index < self.v:
            i = index + 1
            return TimeStep(index, GRADED, i, float(self.graded_nodes[i - 1]), float(self.step_sizes[i - 1]))
        j = index - self.v + self.m + 1
        return TimeStep(index, UNIFORM, j, float(self.uniform_nodes[j - 1 - self.m]), self.h)


def grading_ratio(m: int) -> float:
    return 2.0 if m == 1 else m / (m - 1)


def build(T: float, M: int, m: int, v: int) -> MixedMesh:
    """
    Build the mixed mesh.

    Args:
        T (float): Final time
        M (int): Number of uniform steps of size h = T/M covering [0, T]
        m (int): The graded phase spans [0, m h]
        v (int): Number of graded steps

    Returns:
        MixedMesh: The mesh
    """
    if not T > 0:
        raise ValueError(f"Final time must be positive: {T}")
    if not 1 <= m <= M:
        raise ValueError(f"Graded span multiple must satisfy 1 <= m <= M: m={m}, M={M}")
    if v < 1:
        raise ValueError(f"Number of graded steps must be at least 1: {v}")

    r = grading_ratio(m)
    h = T / M
    try:
        growth = r**v - 1.0
    except OverflowError:
        growth = math.inf
    h1 = m * h * (r - 1.0) / growth
    if h1 < 1e-300:
        raise GradedUnderflow(f"First graded step underflows for v={v}, m={m}, M={M}: h1={h1:.3e}")

    step_sizes = h1 * r ** np.arange(v)
    graded: List[float] = [0.0]
    for i in range(1, v):
        graded.append(math.fsum(step_sizes[:i]))
    # the graded phase closes exactly on the first uniform node
    graded.append(m * h)
    uniform = h * np.arange(m, M + 1, dtype=float)
    uniform[-1] = T

    logger.debug(f"Mixed mesh T={T} M={M} m={m} v={v}: r={r} h={h:.6g} h1={h1:.6g}")
    return MixedMesh(
        T=T,
        M=M,
        m=m,
        v=v,
        r=r,
        h=h,
        h1=h1,
        graded_nodes=np.array(graded),
        uniform_nodes=uniform,
        step_sizes=step_sizes,
    )
