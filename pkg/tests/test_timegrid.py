"""
Unit tests for the mixed graded/uniform mesh.
"""
import numpy as np
import pytest

from src.errors import GradedUnderflow
from src.timegrid import GRADED, UNIFORM, build, grading_ratio


class TestGradingRatio:
    """Test cases for grading_ratio."""

    @pytest.mark.parametrize("m,r", [(1, 2.0), (2, 2.0), (3, 1.5), (5, 1.25)])
    def test_values(self, m, r):
        """r = 2 for m = 1, m/(m-1) otherwise."""
        assert grading_ratio(m) == r


class TestBuild:
    """Test cases for build."""

    def test_pure_uniform(self):
        """v = m = 1 is the uniform mesh."""
        mesh = build(1.0, 10, 1, 1)
        np.testing.assert_allclose(mesh.node_times(), np.linspace(0.0, 1.0, 11), atol=1e-15)
        assert mesh.h1 == pytest.approx(0.1)
        assert mesh.num_steps == 10

    def test_graded_nodes(self):
        """v = 3, m = 1: nodes 0, h/7, 3h/7, h."""
        mesh = build(1.0, 4, 1, 3)
        h = 0.25
        np.testing.assert_allclose(mesh.graded_nodes, [0.0, h / 7, 3 * h / 7, h], rtol=1e-14)
        np.testing.assert_allclose(mesh.step_sizes, [h / 7, 2 * h / 7, 4 * h / 7], rtol=1e-14)

    def test_phases_meet_and_end_at_T(self):
        """The graded phase ends exactly on m h and the mesh ends exactly on T."""
        mesh = build(0.7, 9, 3, 6)
        assert mesh.graded_nodes[-1] == mesh.uniform_nodes[0] == 3 * mesh.h
        assert mesh.uniform_nodes[-1] == 0.7
        times = mesh.node_times()
        assert np.all(np.diff(times) > 0)
        assert times.size == mesh.num_steps + 1

    def test_steps_sequence(self):
        """steps() walks the graded phase, then uniform steps j = m+1..M."""
        mesh = build(1.0, 6, 2, 3)
        steps = list(mesh.steps())
        assert [s.kind for s in steps] == [GRADED] * 3 + [UNIFORM] * 4
        assert [s.local for s in steps] == [1, 2, 3, 3, 4, 5, 6]
        assert [s.index for s in steps] == list(range(7))
        for s in steps:
            assert mesh.step(s.index) == s
        np.testing.assert_allclose([s.t_end for s in steps], mesh.node_times()[1:], rtol=1e-14)

    def test_step_out_of_range(self):
        """Indices outside the mesh are rejected."""
        with pytest.raises(ValueError, match="out of range"):
            build(1.0, 3, 1, 1).step(3)

    @pytest.mark.parametrize("args,match", [
        ((0.0, 4, 1, 1), "Final time"),
        ((1.0, 4, 0, 1), "1 <= m <= M"),
        ((1.0, 4, 5, 1), "1 <= m <= M"),
        ((1.0, 4, 1, 0), "at least 1"),
    ])
    def test_invalid_arguments(self, args, match):
        """Parameter ranges are validated."""
        with pytest.raises(ValueError, match=match):
            build(*args)

    @pytest.mark.parametrize("args,h1", [((1.0, 200, 1, 20), 4.77e-9), ((1.0, 400, 1, 100), 1.97e-33)])
    def test_published_first_steps(self, args, h1):
        """h1 = h / (2^v - 1) for m = 1 reproduces the published values."""
        mesh = build(*args)
        assert mesh.h1 == pytest.approx(h1, rel=5e-3)
        assert mesh.h1 == pytest.approx(args[0] / args[1] / (2.0 ** args[3] - 1.0), rel=1e-14)

    @pytest.mark.parametrize("v", [1000, 1100])
    def test_underflow(self, v):
        """A first step below the floating-point range is reported."""
        with pytest.raises(GradedUnderflow, match="underflows"):
            build(1.0, 10, 1, v)
