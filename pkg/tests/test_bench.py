"""
Tests for the benchmark harness.
"""
from dataclasses import replace
from unittest.mock import patch

import numpy as np
import pytest

from src import bench
from src.bench import (
    ErrorReport,
    error_norms,
    grid_rows,
    node_errors,
    prepare_tables,
    run_case,
    sanity_bound,
    solve_case,
    sweep_spatial,
    sweep_time,
)
from src.config import RunConfig
from src.errors import MissingExactSolution
from src.exporters import CSV_COLUMNS, GRID_HEADER

SMALL = dict(k=8, s=8, log_file=None, record_timing=False)


def small_config(**overrides):
    values = dict(SMALL, problem="zero", alpha=0.5, N=4, M=3, m=1, v=2)
    values.update(overrides)
    return RunConfig(**values)


class TestErrorReport:
    """Test cases for ErrorReport."""

    def test_negative_norms_rejected(self):
        """Error norms cannot be negative."""
        with pytest.raises(ValueError, match="non-negative"):
            ErrorReport(e_inf=-1.0, e_2=0.0)

    def test_row(self):
        """Newton fallbacks count as blended steps and timing can be suppressed."""
        report = ErrorReport(e_inf=1e-9, e_2=2e-9, seconds=3.5, fixed_point_steps=2, blended_steps=3, newton_steps=1)
        row = report.row(small_config())
        assert list(row) == CSV_COLUMNS
        assert row["blended_steps"] == 4
        assert row["seconds"] == 0.0
        assert report.row(small_config(record_timing=True))["seconds"] == 3.5


class TestZeroProblem:
    """Test cases on the problem with an identically zero solution."""

    def test_errors_vanish(self):
        """Zero data give exactly zero errors."""
        report = run_case(small_config(), write=False)
        assert report.e_inf == 0.0
        assert report.e_2 == 0.0
        assert report.fixed_point_steps + report.blended_steps + report.newton_steps == 4
        assert report.iterations == [1, 1, 1, 1]

    def test_csv_is_deterministic(self, tmp_path):
        """Without timing two runs produce byte-identical CSV files."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        run_case(small_config(out=str(first)))
        run_case(small_config(out=str(second)))
        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("zero,0.5,4,3,1,2,8,8,0,0,0,")

    def test_grid_file(self, tmp_path):
        """The grid file has one row per collocation node and mesh time."""
        path = tmp_path / "grid.dat"
        run_case(small_config(grid_out=str(path)))
        assert path.read_text().splitlines()[0] == f"# {GRID_HEADER}"
        data = np.loadtxt(path)
        assert data.shape == ((4 + 1) * (3 - 1 + 2 + 1), 5)
        np.testing.assert_array_equal(data[:, 2:], 0.0)


class TestErrorNorms:
    """Test cases for the error measurements."""

    @pytest.fixture(scope="class")
    def solved(self):
        cfg = small_config(problem="example3", N=12, M=4, v=6, k=12, s=12)
        p, sys, sol, _ = solve_case(cfg)
        return p, sys, sol

    def test_accuracy(self, solved):
        """Example 3 is resolved on a small mesh."""
        p, sys, sol = solved
        report = error_norms(sol, sys, p)
        assert report.e_inf < 1e-4
        assert report.e_2 < 1e-4
        assert report.profile.shape == (13,)
        assert report.dense_max_error >= 0.0

    def test_node_errors_shape(self, solved):
        """One row per mesh time and one column per node."""
        p, sys, sol = solved
        assert node_errors(sol, sys, p).shape == (sol.mesh.num_steps + 1, 13)

    def test_l2_can_be_skipped(self, solved):
        """compute_l2=False leaves e_2 at zero."""
        p, sys, sol = solved
        assert error_norms(sol, sys, p, compute_l2=False).e_2 == 0.0

    def test_dense_error(self, solved):
        """The off-node maximum from the L2 quadrature stays small."""
        p, sys, sol = solved
        assert 0.0 < error_norms(sol, sys, p).dense_max_error < 1e-3
        assert error_norms(sol, sys, p, compute_l2=False).dense_max_error == 0.0

    def test_sanity_bound(self, solved):
        """|u_N| stays below ||u0|| + T^alpha M_f / Gamma(1 + alpha)."""
        p, sys, sol = solved
        assert sanity_bound(sol, sys, p)

    def test_grid_rows_without_exact(self, solved):
        """Missing exact values appear as NaN in the grid."""
        p, sys, sol = solved
        rows = grid_rows(sol, sys, replace(p, exact=None))
        assert np.all(np.isnan(rows[:, 3]))

    def test_missing_exact_solution(self, solved):
        """Errors need the exact solution."""
        p, sys, sol = solved
        with pytest.raises(MissingExactSolution):
            error_norms(sol, sys, replace(p, exact=None))


class TestTableCache:
    """Test cases for prepare_tables."""

    def test_cache_written_and_reused(self, tmp_path):
        """The first run writes the cache, the second reads it."""
        cfg = small_config(tables_cache=str(tmp_path / "tables.txt"))
        mesh = bench.build_mesh(cfg.T, cfg.M, cfg.m, cfg.v)
        built = prepare_tables(cfg, mesh)
        assert (tmp_path / "tables.txt").exists()
        with patch("src.bench.build_tables") as rebuild:
            cached = prepare_tables(cfg, mesh)
        rebuild.assert_not_called()
        np.testing.assert_array_equal(cached.cross_J, built.cross_J)

    def test_mismatched_cache_is_rebuilt(self, tmp_path):
        """A cache for another alpha is ignored and replaced."""
        path = str(tmp_path / "tables.txt")
        first = small_config(tables_cache=path)
        prepare_tables(first, bench.build_mesh(1.0, 3, 1, 2))
        second = small_config(alpha=0.3, tables_cache=path)
        tables = prepare_tables(second, bench.build_mesh(1.0, 3, 1, 2))
        assert tables.alpha == 0.3
        assert "alpha: 0.3" in (tmp_path / "tables.txt").read_text()

    def test_other_j_switch_is_rebuilt(self, tmp_path):
        """Tables built with another J regime switch are not reused."""
        path = str(tmp_path / "tables.txt")
        mesh = bench.build_mesh(1.0, 3, 1, 2)
        prepare_tables(small_config(tables_cache=path), mesh)
        with patch("src.bench.build_tables", wraps=bench.build_tables) as rebuild:
            tables = prepare_tables(small_config(j_switch=3.0, tables_cache=path), mesh)
        rebuild.assert_called_once()
        assert tables.j_switch == 3.0


class TestSweeps:
    """Test cases for the convergence sweeps."""

    def test_spatial_sweep_outputs(self, tmp_path):
        """A sweep writes one CSV row per case and an HTML report."""
        cfg = small_config(out=str(tmp_path / "sweep.csv"), report_out=str(tmp_path / "sweep.md"), html_report=True)
        with patch("src.bench.run_case", return_value=ErrorReport(e_inf=1e-3, e_2=2e-3)) as runner:
            rows = sweep_spatial(cfg, [3, 5, 7])
        assert [r["N"] for r in rows] == [3, 5, 7]
        assert [c.args[0].N for c in runner.call_args_list] == [3, 5, 7]
        assert len((tmp_path / "sweep.csv").read_text().splitlines()) == 4
        assert "Spatial convergence" in (tmp_path / "sweep.md").read_text()
        assert "<table>" in (tmp_path / "sweep.html").read_text()

    def test_time_sweep_caps_m(self):
        """The graded span never exceeds the number of steps."""
        cfg = small_config(M=6, m=4)
        with patch("src.bench.run_case", return_value=ErrorReport(e_inf=0.0, e_2=0.0)):
            rows = sweep_time(cfg, [2, 8])
        assert [(r["M"], r["m"]) for r in rows] == [(2, 2), (8, 4)]

    def test_parallel_sweep_keeps_order(self):
        """Worker threads return rows in input order."""
        cfg = small_config(workers=3)
        reports = {N: ErrorReport(e_inf=e, e_2=0.0) for N, e in zip((2, 4, 6, 8), (1e-2, 1e-4, 1e-6, 1e-8))}
        with patch("src.bench.run_case", side_effect=lambda c, write=False: reports[c.N]):
            rows = sweep_spatial(cfg, [2, 4, 6, 8])
        assert [r["e_inf"] for r in rows] == [1e-2, 1e-4, 1e-6, 1e-8]
