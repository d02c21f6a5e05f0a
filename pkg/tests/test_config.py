"""
Tests for run configuration loading.
"""
import pytest
import yaml

from src.config import RunConfig, load_config
from src.fhbvm import SolverConfig


@pytest.fixture
def config_file(tmp_path):
    """Write a YAML config file and return its path."""
    def write(content):
        path = tmp_path / "run.yaml"
        path.write_text(content)
        return str(path)
    return write


class TestRunConfig:
    """Test cases for RunConfig."""

    def test_defaults(self):
        """Default case is example 1 with the k = s = 22 integrator."""
        cfg = RunConfig()
        assert cfg.problem == "example1"
        assert (cfg.k, cfg.s) == (22, 22)
        assert cfg.log_file == "robinfrac.log"
        assert cfg.record_timing

    @pytest.mark.parametrize("kwargs,match", [
        (dict(alpha=1.0), "alpha"),
        (dict(N=-1), "N must"),
        (dict(T=0.0), "T must"),
        (dict(M=3, m=4), "1 <= m <= M"),
        (dict(v=0), "v must"),
        (dict(workers=0), "workers"),
    ])
    def test_validation(self, kwargs, match):
        """Invalid values are rejected on construction."""
        with pytest.raises(ValueError, match=match):
            RunConfig(**kwargs)

    def test_solver_config(self):
        """Solver settings are carried into SolverConfig."""
        cfg = RunConfig(k=12, s=10, switch_tol=0.2, iteration="blended", j_switch=3.0)
        solver = cfg.solver_config()
        assert isinstance(solver, SolverConfig)
        assert (solver.k, solver.s, solver.switch_tol, solver.iteration, solver.j_switch) == (12, 10, 0.2, "blended", 3.0)

    def test_invalid_solver_settings_surface_late(self):
        """s > k is only caught when the solver config is built."""
        with pytest.raises(ValueError, match="k >= s"):
            RunConfig(k=4, s=6).solver_config()

    def test_with_overrides_ignores_none(self):
        """None overrides keep the current value."""
        cfg = RunConfig().with_overrides(N=7, M=None)
        assert cfg.N == 7
        assert cfg.M == RunConfig().M

    def test_to_dict(self):
        """to_dict lists every field."""
        data = RunConfig(alpha=0.3).to_dict()
        assert data["alpha"] == 0.3
        assert "tables_cache" in data


class TestLoadConfig:
    """Test cases for load_config."""

    def test_no_file(self):
        """Without a file only the overrides apply."""
        cfg = load_config(None, {"alpha": 0.9, "N": None})
        assert cfg.alpha == 0.9
        assert cfg.N == RunConfig().N

    def test_file_values(self, config_file):
        """Values are read from a flat YAML mapping."""
        path = config_file(yaml.safe_dump({"problem": "example2", "alpha": 0.6, "N": 8, "v": 15}))
        cfg = load_config(path)
        assert (cfg.problem, cfg.alpha, cfg.N, cfg.v) == ("example2", 0.6, 8, 15)

    def test_overrides_win(self, config_file):
        """Explicit overrides beat the file."""
        path = config_file("alpha: 0.6\nN: 8\n")
        cfg = load_config(path, {"N": 11})
        assert cfg.N == 11
        assert cfg.alpha == 0.6

    def test_empty_file(self, config_file):
        """An empty file gives the defaults."""
        assert load_config(config_file("")) == RunConfig()

    def test_missing_file(self, tmp_path):
        """A missing file is an error."""
        with pytest.raises(ValueError, match="does not exist"):
            load_config(str(tmp_path / "absent.yaml"))

    def test_not_a_mapping(self, config_file):
        """A YAML list is rejected."""
        with pytest.raises(ValueError, match="mapping"):
            load_config(config_file("- 1\n- 2\n"))

    def test_unknown_keys(self, config_file):
        """Misspelt keys are reported."""
        with pytest.raises(ValueError, match="Unknown configuration keys: alfa"):
            load_config(config_file("alfa: 0.5\n"))
