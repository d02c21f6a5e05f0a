"""
Run configuration: dataclass defaults, YAML config files and flag overrides.
"""
import logging
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .fhbvm import SolverConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Everything one benchmark case needs."""

    problem: str = "example1"
    alpha: float = 0.5
    N: int = 10
    T: float = 1.0
    M: int = 6
    m: int = 1
    v: int = 1
    k: int = 22
    s: int = 22
    switch_tol: float = 0.1
    iter_atol: float = 1e-14
    iter_rtol: float = 1e-12
    max_iters: int = 100
    iteration: str = "auto"
    j_switch: float = 2.0
    cond_limit: float = 1e13
    out: Optional[str] = None
    grid_out: Optional[str] = None
    report_out: Optional[str] = None
    html_report: bool = False
    tables_cache: Optional[str] = None
    log_file: Optional[str] = "robinfrac.log"
    record_timing: bool = True
    compute_l2: bool = True
    workers: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1): {self.alpha}")
        if self.N < 0:
            raise ValueError(f"N must be non-negative: {self.N}")
        if not self.T > 0:
            raise ValueError(f"T must be positive: {self.T}")
        if not 1 <= self.m <= self.M:
            raise ValueError(f"m must satisfy 1 <= m <= M: m={self.m}, M={self.M}")
        if self.v < 1:
            raise ValueError(f"v must be at least 1: {self.v}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1: {self.workers}")

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            k=self.k,
            s=self.s,
            switch_tol=self.switch_tol,
            iter_atol=self.iter_atol,
            iter_rtol=self.iter_rtol,
            max_iters=self.max_iters,
            iteration=self.iteration,
            j_switch=self.j_switch,
        )

    def with_overrides(self, **overrides) -> "RunConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _known_keys():
    return {f.name for f in fields(RunConfig)}


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Build a RunConfig from an optional YAML file and explicit overrides.

    Args:
        path (str, optional): Flat YAML mapping of RunConfig fields
        overrides (dict, optional): Values that win over the file (None entries are ignored)

    Returns:
        RunConfig: The merged configuration

    Raises:
        ValueError: If the file is missing, not a mapping, or names unknown keys
    """
    values: Dict[str, Any] = {}
    if path:
        config_path = Path(path)
        if not config_path.exists():
            raise ValueError(f"Config file does not exist: {path}")
        with open(config_path, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ValueError(f"Config file must contain a mapping: {path}")
        values.update(loaded)
        logger.info(f"Loaded configuration from {path}")

    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    unknown = sorted(set(values) - _known_keys())
    if unknown:
        raise ValueError(f"Unknown configuration keys: {', '.join(unknown)}")
    return RunConfig().with_overrides(**values)
