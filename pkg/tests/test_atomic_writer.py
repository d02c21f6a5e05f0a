"""
Tests for atomic file replacement.
"""
from unittest.mock import patch

from src.atomic_writer import AtomicWriter


def test_creates_parent_directory(tmp_path):
    """The destination directory is created on construction."""
    target = tmp_path / "nested" / "dir" / "out.csv"
    AtomicWriter(str(target))
    assert target.parent.is_dir()


def test_write_and_read(tmp_path):
    """Written text is read back unchanged."""
    writer = AtomicWriter(str(tmp_path / "out.txt"))
    assert writer.read_text() == ""
    assert writer.write_text("first\n")
    assert writer.read_text() == "first\n"


def test_write_replaces(tmp_path):
    """A second write replaces the content and leaves no temporary files."""
    writer = AtomicWriter(str(tmp_path / "out.txt"))
    writer.write_text("first\n")
    writer.write_text("second\n")
    assert writer.read_text() == "second\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]


def test_append(tmp_path):
    """append_text keeps earlier content."""
    writer = AtomicWriter(str(tmp_path / "log.txt"))
    writer.append_text("a\n")
    writer.append_text("b\n")
    assert writer.read_text() == "a\nb\n"


def test_failed_move_cleans_up(tmp_path):
    """A failing move returns False and removes the temporary file."""
    writer = AtomicWriter(str(tmp_path / "out.txt"))
    with patch("src.atomic_writer.shutil.move", side_effect=OSError("disk full")):
        assert not writer.write_text("data")
    assert list(tmp_path.iterdir()) == []
