"""
Exception hierarchy for the fractional reaction-diffusion solver.
"""


class RobinFracError(Exception):
    """Base class for all solver errors."""


class SingularBoundarySystem(RobinFracError, ValueError):
    """The 2x2 Robin system for a basis element has no unique solution."""


class BasisDependence(RobinFracError, ValueError):
    """The derivative-expansion system of the basis is numerically singular."""


class IllConditionedCollocation(RobinFracError, ValueError):
    """The collocation matrix is too ill-conditioned to factor reliably."""


class ZeroEigenvalue(RobinFracError, ValueError):
    """A matrix whose spectrum is used for scaling has a zero eigenvalue."""


class GradedUnderflow(RobinFracError, ValueError):
    """The first graded step underflows the floating-point range."""


class UnsupportedRegime(RobinFracError, ValueError):
    """No available expansion reaches the requested accuracy."""


class MissingExactSolution(RobinFracError, ValueError):
    """An error norm was requested for a problem without exact solution."""


class NonConvergentSeries(RobinFracError, RuntimeError):
    """A truncated series did not reach its tolerance within the term cap."""


class MissingHistory(RobinFracError, RuntimeError):
    """A memory term was requested before the earlier steps were solved."""


class NoConvergence(RobinFracError, RuntimeError):
    """The stage equations of a time step could not be solved."""

    def __init__(self, step: int, method: str, residual: float, iterations: int):
        self.step = step
        self.method = method
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"Step {step}: {method} iteration did not converge after "
            f"{iterations} iterations (last update norm {residual:.3e})"
        )
