"""
Helper utility functions for the toolkit.
"""
import csv
import io
import json
import logging
import sys
import threading
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from config.settings import LOG_DATE_FORMAT, LOG_FORMAT, LOG_LEVEL, REPORTS_DIR
from core.errors import ResourceLimit

_handler: Optional[logging.Handler] = None


class _StderrHandler(logging.StreamHandler):
    """Stream handler bound to whatever sys.stderr is at emit time."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def get_current_timestamp() -> str:
    """
    Get current timestamp in a readable format.

    Returns:
        Formatted timestamp string
    """
    return datetime.now().strftime("%Y-%m-%d %H:%M:%S")


def configure_logging(level: Optional[str] = None) -> None:
    """
    Install a stream handler on the root logger.

    Args:
        level: Level name; defaults to LOG_LEVEL from the settings
    """
    global _handler
    root = logging.getLogger()
    if _handler is not None:
        root.removeHandler(_handler)
    _handler = _StderrHandler()
    _handler.setFormatter(logging.Formatter(LOG_FORMAT, LOG_DATE_FORMAT))
    root.addHandler(_handler)
    root.setLevel((level or LOG_LEVEL).upper())


def rounded_median(values: Iterable[int]) -> int:
    """
    Median of integer values; for an even count the two middle values are
    averaged and rounded half up.

    Args:
        values: Non-empty collection of integers

    Returns:
        The rounded median
    """
    ordered = sorted(values)
    if not ordered:
        raise ValueError("median of an empty collection")
    middle = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[middle]
    return (ordered[middle - 1] + ordered[middle] + 1) // 2


def render_table(rows: Sequence[Dict[str, Any]], columns: Sequence[str], fmt: str = "text") -> str:
    """
    Render rows of a property table.

    Args:
        rows: One mapping per row, keyed by column name
        columns: Column names in output order
        fmt: "text", "csv" or "json"

    Returns:
        The rendered table
    """
    if fmt == "json":
        return json.dumps([{c: row.get(c) for c in columns} for row in rows], ensure_ascii=False, indent=2)
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(cells)
        return out.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    widths = [max([len(c)] + [len(line[i]) for line in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    for line in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(line, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def write_report(content: str, name: str, directory: Path = REPORTS_DIR) -> Path:
    """
    Save a rendered report to the reports directory.

    Args:
        content: Report text
        name: File name; a timestamp is used if empty

    Returns:
        Path to the saved report
    """
    if not name:
        name = f"report_{datetime.now().strftime('%Y%m%d_%H%M%S')}.txt"
    path = Path(directory) / name
    path.write_text(content, encoding="utf-8")
    return path


class Budget:
    """Wall-clock budget shared by cooperating workers."""

    def __init__(self, seconds: Optional[float]):
        self.seconds = seconds
        self.started = time.monotonic()
        self._lock = threading.Lock()
        self.spent_steps = 0

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def expired(self) -> bool:
        return self.seconds is not None and self.elapsed > self.seconds

    def charge(self, steps: int = 1) -> None:
        """Account for work done; raises ResourceLimit once the time is up."""
        with self._lock:
            self.spent_steps += steps
        if self.expired():
            raise ResourceLimit(f"time limit of {self.seconds:g}s exceeded after {self.spent_steps} steps")


def chunked(items: List[Any], size: int) -> List[List[Any]]:
    """Split items into consecutive chunks of at most size elements."""
    size = max(1, size)
    return [items[i:i + size] for i in range(0, len(items), size)]
