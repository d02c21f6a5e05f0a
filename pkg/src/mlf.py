"""
Two-parameter Mittag-Leffler function E_{sigma,beta}(z) on the negative real axis.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import mpmath
import numpy as np
from scipy.special import gammaln, gammasgn, rgamma

from .errors import UnsupportedRegime

logger = logging.getLogger(__name__)

Z_SWITCH = 7.0
TOL = 1e-13
EPS = np.finfo(float).eps
TAYLOR_CAP = 20000
ASYMPTOTIC_CAP = 400


@dataclass(frozen=True)
class MlfParams:
    sigma: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"Mittag-Leffler order must be positive: {self.sigma}")

    def __call__(self, z: float) -> float:
        return mittag_leffler(self.sigma, self.beta, z)


def _taylor_log_terms(sigma: float, beta: float, z: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    m = np.arange(n, dtype=float)
    args = sigma * m + beta
    logmag = m * math.log(abs(z)) - gammaln(args)
    signs = np.where(m % 2 == 0, 1.0, -1.0) * gammasgn(args)
    return logmag, signs


def _taylor_length(sigma: float, beta: float, z: float) -> Tuple[int, float]:
    """Number of series terms needed and log of the largest term."""
    n = 64
    while n <= TAYLOR_CAP:
        logmag, _ = _taylor_log_terms(sigma, beta, z, n)
        peak = float(np.max(logmag))
        tail = logmag[-8:]
        if np.all(np.diff(tail) < 0) and tail[-1] < math.log(EPS * 1e-2) + min(peak, 0.0):
            top = int(np.argmax(logmag))
            cut = top + int(np.argmax(logmag[top:] < math.log(EPS * 1e-2) + min(peak, 0.0)))
            return max(cut, top + 1), peak
        n *= 2
    return TAYLOR_CAP + 1, float("inf")


def taylor_series(sigma: float, beta: float, z: float) -> Tuple[float, float]:
    """
    Power series sum_m z^m / Gamma(sigma m + beta).

    Summed in double precision when cancellation is mild, otherwise with
    mpmath at a working precision that absorbs the size of the largest term.

    Returns:
        Tuple[float, float]: (value, error estimate)
    """
    if z == 0:
        return float(rgamma(beta)), 0.0
    n, log_peak = _taylor_length(sigma, beta, z)
    if n > TAYLOR_CAP:
        return math.nan, math.inf
    if log_peak < math.log(1e2):
        logmag, signs = _taylor_log_terms(sigma, beta, z, n)
        terms = np.where(np.isfinite(logmag), signs * np.exp(logmag), 0.0)
        value = float(math.fsum(terms))
        return value, 4.0 * EPS * float(np.max(np.abs(terms)))

    digits = int(log_peak / math.log(10.0)) + 25
    with mpmath.workdps(digits):
        zz = mpmath.mpf(z)
        s, b = mpmath.mpf(sigma), mpmath.mpf(beta)
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        for m in range(n):
            total += power * mpmath.rgamma(s * m + b)
            power *= zz
        value = float(total)
    logger.debug(f"Extended-precision Mittag-Leffler series at z={z} ({n} terms, {digits} digits)")
    return value, EPS * abs(value)


def asymptotic_series(sigma: float, beta: float, z: float) -> Tuple[float, float]:
    """
    Optimally truncated expansion -sum_{n>=1} z^(-n) / Gamma(beta - sigma n) for z << 0.

    Valid on the negative axis for sigma < 1; for sigma = 1 only when the
    exponential contribution |z|^(1-beta) e^z is negligible.

    Returns:
        Tuple[float, float]: (value, error estimate)
    """
    if z >= 0 or sigma > 1:
        return math.nan, math.inf
    n = np.arange(1, ASYMPTOTIC_CAP + 1, dtype=float)
    args = beta - sigma * n
    logmag = -n * math.log(-z) - gammaln(args)
    mags = np.exp(logmag)
    signs = -np.where(n % 2 == 0, 1.0, -1.0) * gammasgn(args)
    nonzero = np.flatnonzero(mags > 0)
    if nonzero.size == 0:
        value, error = 0.0, 0.0
    else:
        cut = nonzero[int(np.argmin(mags[nonzero]))]
        value = float(math.fsum(np.where(mags[:cut] > 0, signs[:cut] * mags[:cut], 0.0)))
        error = float(mags[cut])
    if sigma == 1:
        error += abs(z) ** (1.0 - beta) * math.exp(z)
    return value, error


def mittag_leffler(sigma: float, beta: float, z: float, z_switch: float = Z_SWITCH, tol: float = TOL) -> float:
    """
    Evaluate E_{sigma,beta}(z) for real z <= 0.

    Args:
        sigma (float): Order, sigma > 0
        beta (float): Second parameter
        z (float): Non-positive argument
        z_switch (float): |z| up to which the power series is tried first
        tol (float): Accepted error relative to max(1, |value|)

    Returns:
        float: E_{sigma,beta}(z)

    Raises:
        UnsupportedRegime: If z > 0 or no expansion reaches the tolerance
    """
    z = float(z)
    if not sigma > 0:
        raise ValueError(f"Mittag-Leffler order must be positive: {sigma}")
    if z > 0:
        raise UnsupportedRegime(f"Only real arguments z <= 0 are supported: z={z}")
    if z == 0:
        return float(rgamma(beta))
    if sigma == 1 and beta == 1:
        return math.exp(z)

    methods = (taylor_series, asymptotic_series) if -z <= z_switch else (asymptotic_series, taylor_series)
    estimates = []
    for method in methods:
        value, error = method(sigma, beta, z)
        if math.isfinite(value) and error <= tol * max(1.0, abs(value)):
            return value
        estimates.append((method.__name__, error))
    raise UnsupportedRegime(
        f"No expansion of E_{{{sigma},{beta}}} reaches {tol:.0e} at z={z}: "
        + ", ".join(f"{name} error {err:.2e}" for name, err in estimates)
    )
