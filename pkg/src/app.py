"""
Main application class for the fractional reaction-diffusion benchmarks.
"""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .config import RunConfig
from .table_store import dump_tables
from .timegrid import build as build_mesh
from .weighted_jacobi import build_basis, build_tables
from . import bench

LOG_FORMAT = '%(levelname)-8s %(name)s:%(lineno)d %(message)s'


class BenchmarkApp:
    """Runs single cases, sweeps and table dumps for one configuration."""

    def __init__(self, config: RunConfig, runner=None, level: int = logging.INFO):
        """
        Initialize the application.

        Args:
            config (RunConfig): Merged configuration
            runner: Optional module-like object with run_case/sweep_spatial/sweep_time (for testing)
            level (int): Logging level for console and file
        """
        self.config = config
        self.runner = runner or bench
        self.level = level

        # Set up logging
        self._setup_logging()

    def _setup_logging(self) -> None:
        """Set up logging configuration."""
        # handlers go on the package logger so every module's records reach them
        self.logger = logging.getLogger("src")
        self.logger.setLevel(self.level)
        if getattr(self.logger, "_robinfrac_configured", False):
            return

        formatter = logging.Formatter(LOG_FORMAT)

        # Create a console handler
        console_handler = logging.StreamHandler()
        console_handler.setLevel(self.level)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        # Create a file handler
        if self.config.log_file:
            log_file = Path(self.config.log_file)
            log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file)
            file_handler.setLevel(self.level)
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

        self.logger._robinfrac_configured = True

    def run(self) -> Dict:
        """Run the configured single case and return its CSV row."""
        self.logger.info(f"Running {self.config.problem} with alpha={self.config.alpha}")
        self.logger.debug(f"Configuration: {self.config.to_dict()}")
        report = self.runner.run_case(self.config)
        return report.row(self.config)

    def sweep_space(self, N_list: Sequence[int]) -> List[Dict]:
        if not N_list:
            raise ValueError("Spatial sweep needs at least one N")
        self.logger.info(f"Spatial sweep over N={list(N_list)}")
        return self.runner.sweep_spatial(self.config, N_list)

    def sweep_time(self, M_list: Sequence[int]) -> List[Dict]:
        if not M_list:
            raise ValueError("Temporal sweep needs at least one M")
        self.logger.info(f"Temporal sweep over M={list(M_list)}")
        return self.runner.sweep_time(self.config, M_list)

    def dump_tables(self, path: Optional[str] = None) -> str:
        """Build the kernel tables of the configured mesh and write them to path."""
        target = path or self.config.tables_cache or self.config.out
        if not target:
            raise ValueError("No output path for the table dump")
        cfg = self.config
        mesh = build_mesh(cfg.T, cfg.M, cfg.m, cfg.v)
        tables = build_tables(build_basis(cfg.alpha, cfg.k), cfg.k, cfg.s, cfg.alpha, mesh, cfg.j_switch)
        if not dump_tables(tables, target):
            raise RuntimeError(f"Could not write tables to {target}")
        self.logger.info(f"Kernel tables written to {target}")
        return target
