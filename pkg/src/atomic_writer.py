"""
Atomic replacement of result files.
"""
import os
import shutil
import tempfile
from pathlib import Path
import logging

logger = logging.getLogger(__name__)


class AtomicWriter:
    """Writes a file next to its destination and moves it into place."""

    def __init__(self, target: str):
        """
        Initialize the AtomicWriter.

        Args:
            target (str): Final path of the file
        """
        self.target = Path(target)
        # Create parent directory if it doesn't exist
        self.target.parent.mkdir(parents=True, exist_ok=True)

    def write_text(self, text: str) -> bool:
        """
        Replace the target with the given text.

        Args:
            text (str): Full file content

        Returns:
            bool: True if the file was written, False otherwise
        """
        tmp_name = None
        try:
            fd, tmp_name = tempfile.mkstemp(prefix=f".{self.target.name}.", dir=str(self.target.parent))
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            shutil.move(tmp_name, str(self.target))
            logger.info(f"Wrote {self.target}")
            return True

        except Exception as e:
            logger.error(f"Error writing file {self.target}: {str(e)}")
            if tmp_name and os.path.exists(tmp_name):
                os.remove(tmp_name)
            return False

    def read_text(self) -> str:
        """Current content of the target, empty if it does not exist."""
        if not self.target.exists():
            return ""
        return self.target.read_text(encoding="utf-8")

    def append_text(self, text: str) -> bool:
        """Rewrite the target as its current content followed by text."""
        return self.write_text(self.read_text() + text)
