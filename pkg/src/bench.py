"""
Benchmark harness: error norms, single runs and convergence sweeps.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .config import RunConfig
from .errors import MissingExactSolution
from .exporters import ExporterFactory
from .fhbvm import BLENDED, FIXED_POINT, NEWTON, DenseSolution, FhbvmIntegrator
from .problems import problem
from .spacedisc import SemiDiscreteSystem, TfrdeProblem, assemble
from .table_store import dump_tables, load_tables
from .timegrid import build as build_mesh
from .weighted_jacobi import FhbvmTables, build_basis, build_tables

logger = logging.getLogger(__name__)


@dataclass
class ErrorReport:
    e_inf: float
    e_2: float
    profile: np.ndarray = field(default_factory=lambda: np.zeros(0))
    dense_max_error: float = 0.0
    seconds: float = 0.0
    fixed_point_steps: int = 0
    blended_steps: int = 0
    newton_steps: int = 0
    iterations: List[int] = field(default_factory=list)
    methods: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.e_inf < 0 or self.e_2 < 0:
            raise ValueError(f"Error norms must be non-negative: e_inf={self.e_inf}, e_2={self.e_2}")

    def row(self, cfg: RunConfig) -> Dict:
        """CSV row for this case."""
        return {
            "problem": cfg.problem,
            "alpha": float(cfg.alpha),
            "N": cfg.N,
            "M": cfg.M,
            "m": cfg.m,
            "v": cfg.v,
            "k": cfg.k,
            "s": cfg.s,
            "e_inf": float(self.e_inf),
            "e_2": float(self.e_2),
            "seconds": float(self.seconds) if cfg.record_timing else 0.0,
            "fixed_point_steps": self.fixed_point_steps,
            # simplified-Newton fallbacks started as blended steps
            "blended_steps": self.blended_steps + self.newton_steps,
        }


def _exact(p: TfrdeProblem) -> None:
    if p.exact is None:
        raise MissingExactSolution(f"Problem {p.name} has no exact solution")


def node_errors(sol: DenseSolution, sys: SemiDiscreteSystem, p: TfrdeProblem) -> np.ndarray:
    """|u - u_N| at collocation nodes (columns) for every mesh node time (rows)."""
    _exact(p)
    times = sol.node_times()
    numeric = sol.node_values() @ sys.Psi.T
    exact = np.vstack([p.exact(sys.nodes, t) for t in times])
    return np.abs(exact - numeric)


def error_norms(sol: DenseSolution, sys: SemiDiscreteSystem, p: TfrdeProblem,
                compute_l2: bool = True) -> ErrorReport:
    """
    Discrete maximum error and space-time L2 error.

    e_inf is taken over collocation nodes and mesh node times. The L2 error
    uses 2s Gauss-Legendre points in time on every step against the dense
    output and max(2N, 2) points in space.

    Raises:
        MissingExactSolution: If the problem has no exact solution
    """
    errors = node_errors(sol, sys, p)
    e_inf = float(np.max(errors))
    profile = np.max(errors, axis=0)
    if not compute_l2:
        return ErrorReport(e_inf=e_inf, e_2=0.0, profile=profile)

    N = sys.basis.N
    xq, xw = leggauss(max(2 * N, 2))
    iv = p.iv
    x = iv.center + 0.5 * iv.length * xq
    xw = 0.5 * iv.length * xw
    Phi = sys.basis.eval(x)

    tq, tw = leggauss(2 * sol.tables.s)
    c = 0.5 * (tq + 1.0)
    total = 0.0
    dense_max = 0.0
    for step in sol.mesh.steps():
        Y = sol.evaluate_step(step.index, c)
        numeric = Y @ Phi.T
        times = step.t_start + step.h * c
        exact = np.vstack([p.exact(x, t) for t in times])
        diff = exact - numeric
        dense_max = max(dense_max, float(np.max(np.abs(diff))))
        total += 0.5 * step.h * float(tw @ (diff**2 @ xw))
    return ErrorReport(e_inf=e_inf, e_2=math.sqrt(max(total, 0.0)), profile=profile, dense_max_error=dense_max)


def sanity_bound(sol: DenseSolution, sys: SemiDiscreteSystem, p: TfrdeProblem, samples: int = 201) -> bool:
    """
    Check max |u_N| <= ||u0|| + T^alpha M_f / Gamma(1 + alpha) over nodes and mesh times.

    M_f is sampled on a uniform grid of the space-time rectangle.
    """
    x = np.linspace(p.iv.a, p.iv.b, samples)
    times = np.unique(np.concatenate([np.linspace(0.0, p.T, samples), sol.node_times()]))
    M0 = float(np.max(np.abs(p.u0(x))))
    Mf = max(float(np.max(np.abs(p.f(x, t)))) for t in times)
    bound = M0 + p.T**p.alpha * Mf / math.gamma(1.0 + p.alpha)
    largest = float(np.max(np.abs(sol.node_values() @ sys.Psi.T)))
    holds = largest <= bound + 1e-6 * max(1.0, bound)
    logger.debug(f"Solution bound for {p.name}: max |u_N| = {largest:.6g}, bound {bound:.6g}")
    return holds


def prepare_tables(cfg: RunConfig, mesh) -> FhbvmTables:
    """Build the kernel tables, going through the cache file when configured."""
    expected = {"alpha": float(cfg.alpha), "k": cfg.k, "s": cfg.s, "T": float(cfg.T),
                "M": cfg.M, "m": cfg.m, "v": cfg.v, "j_switch": float(cfg.j_switch)}
    if cfg.tables_cache and Path(cfg.tables_cache).exists():
        try:
            tables = load_tables(cfg.tables_cache, expected)
            logger.info(f"Using cached kernel tables {cfg.tables_cache}")
            return tables
        except ValueError as e:
            logger.warning(f"Ignoring table cache: {e}")
    tables = build_tables(build_basis(cfg.alpha, cfg.k), cfg.k, cfg.s, cfg.alpha, mesh, cfg.j_switch)
    if cfg.tables_cache:
        dump_tables(tables, cfg.tables_cache)
    return tables


def grid_rows(sol: DenseSolution, sys: SemiDiscreteSystem, p: TfrdeProblem) -> np.ndarray:
    """(x, t, u_num, u_exact, abs_err) at collocation nodes and mesh node times."""
    times = sol.node_times()
    numeric = sol.node_values() @ sys.Psi.T
    rows = []
    for t, values in zip(times, numeric):
        exact = p.exact(sys.nodes, t) if p.exact is not None else np.full_like(values, np.nan)
        rows.append(np.column_stack([sys.nodes, np.full_like(values, t), values, exact, np.abs(exact - values)]))
    return np.vstack(rows)


def solve_case(cfg: RunConfig):
    """Assemble and integrate one configuration; returns (problem, system, solution, seconds)."""
    p = problem(cfg.problem, cfg.alpha, cfg.T)
    start = time.perf_counter()
    sys = assemble(p, cfg.N, cfg.cond_limit)
    mesh = build_mesh(cfg.T, cfg.M, cfg.m, cfg.v)
    tables = prepare_tables(cfg, mesh)
    sol = FhbvmIntegrator(sys, mesh, cfg.alpha, sys.y0, cfg.solver_config(), tables).run()
    return p, sys, sol, time.perf_counter() - start


def run_case(cfg: RunConfig, write: bool = True) -> ErrorReport:
    """
    Assemble, integrate and measure one case.

    Args:
        cfg (RunConfig): The case
        write (bool): Write the CSV row and grid file named in cfg

    Returns:
        ErrorReport: Errors, timing and iteration statistics
    """
    p, sys, sol, seconds = solve_case(cfg)
    report = error_norms(sol, sys, p, cfg.compute_l2)
    report.seconds = seconds
    report.methods = [st.method for st in sol.stats]
    report.iterations = [st.iterations for st in sol.stats]
    report.fixed_point_steps = report.methods.count(FIXED_POINT)
    report.blended_steps = report.methods.count(BLENDED)
    report.newton_steps = report.methods.count(NEWTON)
    logger.info(
        f"{cfg.problem} alpha={cfg.alpha} N={cfg.N} M={cfg.M} m={cfg.m} v={cfg.v}: "
        f"e_inf={report.e_inf:.3e} e_2={report.e_2:.3e} in {seconds:.2f}s"
    )
    if write:
        if cfg.out:
            ExporterFactory.create_exporter("csv", path=cfg.out).export([report.row(cfg)])
        if cfg.grid_out:
            ExporterFactory.create_exporter("grid", path=cfg.grid_out).export(grid_rows(sol, sys, p))
    return report


def _sweep(cases: Sequence[RunConfig], workers: int) -> List[ErrorReport]:
    if workers > 1 and len(cases) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: run_case(c, write=False), cases))
    return [run_case(c, write=False) for c in cases]


def _emit(cfg: RunConfig, cases: Sequence[RunConfig], reports: Sequence[ErrorReport], title: str) -> List[Dict]:
    rows = [report.row(case) for case, report in zip(cases, reports)]
    if cfg.out:
        ExporterFactory.create_exporter("csv", path=cfg.out).export(rows)
    if cfg.report_out:
        exporter = ExporterFactory.create_exporter("markdown", path=cfg.report_out, html=cfg.html_report)
        exporter.title = title
        exporter.export(rows)
    return rows


def sweep_spatial(cfg: RunConfig, N_list: Sequence[int]) -> List[Dict]:
    """Errors for each truncation degree on the configured time mesh."""
    cases = [replace(cfg, N=N) for N in N_list]
    reports = _sweep(cases, cfg.workers)
    return _emit(cfg, cases, reports, f"Spatial convergence ({cfg.problem}, alpha={cfg.alpha})")


def sweep_time(cfg: RunConfig, M_list: Sequence[int]) -> List[Dict]:
    """Errors for each number of uniform steps at fixed N."""
    cases = [replace(cfg, M=M, m=min(cfg.m, M)) for M in M_list]
    reports = _sweep(cases, cfg.workers)
    return _emit(cfg, cases, reports, f"Temporal convergence ({cfg.problem}, alpha={cfg.alpha})")
