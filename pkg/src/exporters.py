"""
Abstract base class and implementations for result exporters.
"""
import csv
import io
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, List, Sequence

import markdown
import numpy as np

from .atomic_writer import AtomicWriter

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "problem", "alpha", "N", "M", "m", "v", "k", "s",
    "e_inf", "e_2", "seconds", "fixed_point_steps", "blended_steps",
]
GRID_HEADER = "x t u_num u_exact abs_err"


def format_value(value: Any) -> str:
    """Floats at 17 significant digits, everything else as str."""
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


class ResultExporter(ABC):
    """Abstract base class for result exporters."""

    @abstractmethod
    def export(self, rows: Sequence[Any]) -> bool:
        """
        Write result rows to the target.

        Args:
            rows (Sequence): Rows to write; their shape depends on the exporter

        Returns:
            bool: True if export was successful, False otherwise
        """
        pass

    @abstractmethod
    def validate_configuration(self) -> bool:
        """
        Validate that the exporter is properly configured.

        Returns:
            bool: True if configuration is valid, False otherwise
        """
        pass


class CsvExporter(ResultExporter):
    """Appends benchmark rows to a CSV file, writing the header once."""

    def __init__(self, path: str, columns: List[str] = None):
        self.path = path
        self.columns = columns or list(CSV_COLUMNS)
        self.writer = AtomicWriter(path)

    def validate_configuration(self) -> bool:
        return bool(self.path) and len(self.columns) > 0

    def render(self, rows: Iterable[Dict[str, Any]], header: bool) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if header:
            writer.writerow(self.columns)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in self.columns])
        return buffer.getvalue()

    def export(self, rows: Sequence[Dict[str, Any]]) -> bool:
        header = not self.writer.read_text()
        return self.writer.append_text(self.render(rows, header=header))


class MarkdownExporter(ResultExporter):
    """Convergence table as GitHub-style markdown, optionally rendered to HTML."""

    def __init__(self, path: str, html: bool = False, title: str = "Convergence report",
                 columns: List[str] = None):
        self.path = path
        self.html = html
        self.title = title
        self.columns = columns or list(CSV_COLUMNS)
        self.md = markdown.Markdown(extensions=["markdown.extensions.tables"])

    def validate_configuration(self) -> bool:
        return bool(self.path)

    def render(self, rows: Sequence[Dict[str, Any]]) -> str:
        lines = [f"# {self.title}", ""]
        lines.append("| " + " | ".join(self.columns) + " |")
        lines.append("|" + "|".join("---" for _ in self.columns) + "|")
        for row in rows:
            cells = []
            for c in self.columns:
                value = row[c]
                if isinstance(value, (float, np.floating)):
                    cells.append(f"{value:.3e}" if c.startswith("e_") else f"{value:.6g}")
                else:
                    cells.append(str(value))
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"

    def export(self, rows: Sequence[Dict[str, Any]]) -> bool:
        text = self.render(rows)
        if not AtomicWriter(self.path).write_text(text):
            return False
        if self.html:
            self.md.reset()
            body = self.md.convert(text)
            html_path = str(self.path).rsplit(".", 1)[0] + ".html"
            return AtomicWriter(html_path).write_text(f"<html><body>\n{body}\n</body></html>\n")
        return True


class GridExporter(ResultExporter):
    """Space-time grid of numerical and exact values for surface plots."""

    def __init__(self, path: str):
        self.path = path

    def validate_configuration(self) -> bool:
        return bool(self.path)

    def export(self, rows: Sequence[Sequence[float]]) -> bool:
        data = np.atleast_2d(np.asarray(rows, dtype=float))
        if data.size and data.shape[1] != 5:
            logger.error(f"Grid rows need 5 columns, got {data.shape[1]}")
            return False
        buffer = io.StringIO()
        np.savetxt(buffer, data.reshape(-1, 5), fmt="%.17g", header=GRID_HEADER, comments="# ")
        return AtomicWriter(self.path).write_text(buffer.getvalue())


class ExporterFactory:
    """Factory class for creating result exporters."""

    @staticmethod
    def create_exporter(export_type: str, **kwargs) -> ResultExporter:
        """
        Create an exporter instance based on the export type.

        Args:
            export_type (str): Type of exporter ('csv', 'markdown' or 'grid')
            **kwargs: Additional arguments for exporter configuration

        Returns:
            ResultExporter: An instance of the appropriate exporter

        Raises:
            ValueError: If export_type is not supported
        """
        if export_type == "csv":
            return CsvExporter(kwargs["path"])
        elif export_type == "markdown":
            return MarkdownExporter(kwargs["path"], html=kwargs.get("html", False))
        elif export_type == "grid":
            return GridExporter(kwargs["path"])
        else:
            raise ValueError(f"Unsupported export type: {export_type}")
