"""
Unit tests for the Mittag-Leffler evaluator.
"""
import math

import mpmath
import numpy as np
import pytest
from scipy.special import erfcx

from src.errors import UnsupportedRegime
from src.mlf import MlfParams, asymptotic_series, mittag_leffler, taylor_series


def reference_series(sigma, beta, z, terms=800, digits=40):
    with mpmath.workdps(digits):
        zz = mpmath.mpf(z)
        return float(mpmath.fsum(zz**m * mpmath.rgamma(sigma * m + beta) for m in range(terms)))


class TestSpecialCases:
    """Test cases for closed-form special cases."""

    @pytest.mark.parametrize("beta", [1.0, 0.5, 2.5])
    def test_zero_argument(self, beta):
        """E_{sigma,beta}(0) = 1 / Gamma(beta)."""
        assert mittag_leffler(0.3, beta, 0.0) == pytest.approx(1.0 / math.gamma(beta))

    @pytest.mark.parametrize("z", [-0.5, -3.0, -40.0])
    def test_exponential(self, z):
        """E_{1,1} is the exponential."""
        assert mittag_leffler(1.0, 1.0, z) == math.exp(z)

    def test_known_values_of_half_order(self):
        """E_{1/2}(-1) = erfcx(1) and E_{1/2}(-10) = erfcx(10)."""
        assert mittag_leffler(0.5, 1.0, -1.0) == pytest.approx(0.4275835761558070, rel=1e-13)
        assert mittag_leffler(0.5, 1.0, -10.0) == pytest.approx(0.05614099274382259, rel=1e-13)

    @pytest.mark.parametrize("z", np.linspace(-25.0, -0.1, 23))
    def test_half_order_against_erfcx(self, z):
        """E_{1/2}(z) = erfcx(-z) across both branches."""
        assert mittag_leffler(0.5, 1.0, z) == pytest.approx(erfcx(-z), rel=1e-12)


class TestBranches:
    """Test cases for the series and asymptotic branches."""

    def test_branches_agree(self):
        """The asymptotic expansion and the extended-precision series agree at z = -7."""
        asym, asym_err = asymptotic_series(0.5, 1.0, -7.0)
        series, _ = taylor_series(0.5, 1.0, -7.0)
        assert asym_err < 1e-14
        assert asym == pytest.approx(series, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.1, 0.6, 0.9])
    @pytest.mark.parametrize("t", [0.01, 0.5, 1.0])
    def test_relaxation_function(self, alpha, t):
        """E_alpha(-t^alpha) against an extended-precision sum."""
        z = -(t**alpha)
        assert mittag_leffler(alpha, 1.0, z) == pytest.approx(reference_series(alpha, 1.0, z), rel=1e-12)

    def test_two_parameter_series(self):
        """E_{0.7, 1.3} at a moderate argument."""
        z = -4.0
        assert mittag_leffler(0.7, 1.3, z) == pytest.approx(reference_series(0.7, 1.3, z), rel=1e-11)

    def test_parameter_shift_recurrence(self):
        """E_{sigma,beta}(z) = z E_{sigma,beta+sigma}(z) + 1/Gamma(beta) at random points."""
        rng = np.random.default_rng(2024)
        for _ in range(50):
            sigma = rng.uniform(0.3, 1.0)
            beta = rng.uniform(0.6, 2.0)
            z = -rng.uniform(0.0, 8.0)
            shifted = z * mittag_leffler(sigma, beta + sigma, z) + 1.0 / math.gamma(beta)
            assert mittag_leffler(sigma, beta, z) == pytest.approx(shifted, rel=1e-10, abs=1e-11), (sigma, beta, z)

    @pytest.mark.parametrize("sigma", [0.1, 0.5, 0.9])
    def test_relaxation_decreases(self, sigma):
        """E_sigma(-t^sigma) is strictly decreasing on t in [0, 10]."""
        t = np.linspace(0.0, 10.0, 101)
        values = np.array([mittag_leffler(sigma, 1.0, -(ti**sigma)) for ti in t])
        assert values[0] == 1.0
        assert np.all(np.diff(values) < 0.0)

    def test_asymptotic_unavailable_above_order_one(self):
        """The expansion is not used for sigma > 1."""
        value, error = asymptotic_series(1.5, 1.0, -30.0)
        assert math.isnan(value)
        assert error == math.inf


class TestErrors:
    """Test cases for rejected input."""

    def test_positive_argument(self):
        """Only z <= 0 is supported."""
        with pytest.raises(UnsupportedRegime, match="z <= 0"):
            mittag_leffler(0.5, 1.0, 1.0)

    def test_non_positive_order(self):
        """sigma must be positive."""
        with pytest.raises(ValueError, match="positive"):
            mittag_leffler(0.0, 1.0, -1.0)
        with pytest.raises(ValueError, match="positive"):
            MlfParams(sigma=-1.0)


class TestParams:
    """Test cases for MlfParams."""

    def test_params_callable(self):
        """MlfParams evaluates like mittag_leffler."""
        assert MlfParams(0.5)(-1.0) == mittag_leffler(0.5, 1.0, -1.0)
