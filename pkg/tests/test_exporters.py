"""
Tests for the result exporters.
"""
import numpy as np
import pytest

from src.exporters import (
    CSV_COLUMNS,
    GRID_HEADER,
    CsvExporter,
    ExporterFactory,
    GridExporter,
    MarkdownExporter,
    ResultExporter,
    format_value,
)


def make_row(**overrides):
    row = {
        "problem": "example1", "alpha": 0.5, "N": 10, "M": 6, "m": 1, "v": 1, "k": 22, "s": 22,
        "e_inf": 1.25e-11, "e_2": 3.5e-12, "seconds": 0.0, "fixed_point_steps": 0, "blended_steps": 6,
    }
    row.update(overrides)
    return row


class TestFormatting:
    """Test cases for value formatting."""

    def test_float_round_trip_precision(self):
        """Floats keep 17 significant digits."""
        assert float(format_value(0.1)) == 0.1
        assert format_value(0.1) == "0.10000000000000001"

    def test_non_floats(self):
        """Integers and strings are written as-is."""
        assert format_value(7) == "7"
        assert format_value("example2") == "example2"
        assert format_value(np.float64(2.5)) == "2.5"


class TestCsvExporter:
    """Test cases for CsvExporter."""

    def test_header_written_once(self, tmp_path):
        """Two exports share one header line."""
        path = tmp_path / "results.csv"
        exporter = CsvExporter(str(path))
        assert exporter.export([make_row()])
        assert exporter.export([make_row(N=12)])
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 3
        assert lines[2].startswith("example1,0.5,12,")

    def test_deterministic(self, tmp_path):
        """Identical rows give identical files."""
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        CsvExporter(str(a)).export([make_row(), make_row(alpha=0.1)])
        CsvExporter(str(b)).export([make_row(), make_row(alpha=0.1)])
        assert a.read_bytes() == b.read_bytes()

    def test_missing_column(self, tmp_path):
        """Rows must carry every column."""
        row = make_row()
        del row["e_2"]
        with pytest.raises(KeyError):
            CsvExporter(str(tmp_path / "r.csv")).export([row])

    def test_validate_configuration(self, tmp_path):
        """A path and at least one column are needed."""
        assert CsvExporter(str(tmp_path / "r.csv")).validate_configuration()
        assert not CsvExporter("").validate_configuration()


class TestMarkdownExporter:
    """Test cases for MarkdownExporter."""

    def test_render(self):
        """Errors use three-digit scientific notation."""
        text = MarkdownExporter("report.md", title="Spatial convergence").render([make_row()])
        lines = text.splitlines()
        assert lines[0] == "# Spatial convergence"
        assert lines[2].startswith("| problem | alpha | N |")
        assert "1.250e-11" in lines[4]
        assert "| 0.5 |" in lines[4]

    def test_export_with_html(self, tmp_path):
        """The HTML rendering contains a table next to the markdown file."""
        path = tmp_path / "report.md"
        assert MarkdownExporter(str(path), html=True).export([make_row()])
        html = (tmp_path / "report.html").read_text()
        assert "<table>" in html
        assert "<td>example1</td>" in html
        assert path.read_text().startswith("# Convergence report")

    def test_export_without_html(self, tmp_path):
        """No HTML file unless requested."""
        MarkdownExporter(str(tmp_path / "report.md")).export([make_row()])
        assert not (tmp_path / "report.html").exists()


class TestGridExporter:
    """Test cases for GridExporter."""

    def test_export(self, tmp_path):
        """Rows are written under the column header."""
        path = tmp_path / "grid.dat"
        rows = np.array([[0.0, 0.0, 0.0, 0.0, 0.0], [0.5, 1.0, 0.1, 0.1, 1e-12]])
        assert GridExporter(str(path)).export(rows)
        assert path.read_text().splitlines()[0] == f"# {GRID_HEADER}"
        np.testing.assert_array_equal(np.loadtxt(path), rows)

    def test_wrong_width(self, tmp_path):
        """Rows with the wrong number of columns are refused."""
        assert not GridExporter(str(tmp_path / "grid.dat")).export(np.zeros((2, 3)))


class TestExporterFactory:
    """Test cases for ExporterFactory."""

    @pytest.mark.parametrize("kind,cls", [
        ("csv", CsvExporter),
        ("markdown", MarkdownExporter),
        ("grid", GridExporter),
    ])
    def test_create(self, tmp_path, kind, cls):
        """Each supported type maps to its exporter."""
        exporter = ExporterFactory.create_exporter(kind, path=str(tmp_path / "out"))
        assert isinstance(exporter, cls)
        assert isinstance(exporter, ResultExporter)

    def test_markdown_html_flag(self, tmp_path):
        """The html flag reaches the markdown exporter."""
        exporter = ExporterFactory.create_exporter("markdown", path=str(tmp_path / "r.md"), html=True)
        assert exporter.html

    def test_unsupported(self):
        """Unknown types raise ValueError."""
        with pytest.raises(ValueError, match="Unsupported export type: xlsx"):
            ExporterFactory.create_exporter("xlsx", path="out.xlsx")
