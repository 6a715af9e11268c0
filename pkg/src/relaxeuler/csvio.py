"""Delimited output files: UTF-8 CSV with '#'-prefixed metadata lines.

Three schemas are emitted by the experiment drivers:

    profile     x,rho,q,u
    table       eps,potential,cells,err_rho,err_q
    timeseries  t,max_q,l1_rho_err

Metadata lines come first (``# key=value``): the full configuration echo,
a version string, the step count and the wall time.  Every numeric value
is written with repr-exact precision, so rerunning a configuration
reproduces the file byte for byte (the wall-time line is the one
deliberately volatile exception).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CsvFormatError

PROFILE_COLUMNS = ("x", "rho", "q", "u")
TABLE_COLUMNS = ("eps", "potential", "cells", "err_rho", "err_q")
TIMESERIES_COLUMNS = ("t", "max_q", "l1_rho_err")

#: Metadata keys ignored by the byte-identity comparison of reruns.
VOLATILE_KEYS = ("wall_time",)


def _fmt(value) -> str:
    # repr is the shortest digit string that round-trips the double exactly
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


@dataclass
class CsvData:
    metadata: dict[str, str]
    header: list[str]
    columns: dict[str, np.ndarray]

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0


def write_csv(path, header, rows, metadata: dict | None = None) -> Path:
    """Write metadata lines, a header row, and data rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}={_fmt(value)}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_csv(path) -> CsvData:
    """Read a file written by write_csv back into columns.

    Columns whose every entry parses as a float come back as float arrays;
    anything else stays an object array of strings.
    """
    path = Path(path)
    metadata: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                metadata[key.strip()] = value.strip()
            continue
        fields = line.split(",")
        if header is None:
            header = [f.strip() for f in fields]
            continue
        if len(fields) != len(header):
            raise CsvFormatError(
                f"{path}:{lineno}: expected {len(header)} fields, found {len(fields)}"
            )
        rows.append(fields)
    if header is None:
        raise CsvFormatError(f"{path}: no header row found")
    columns: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        raw_col = [r[j] for r in rows]
        try:
            columns[name] = np.array([float(v) for v in raw_col])
        except ValueError:
            columns[name] = np.array(raw_col, dtype=object)
    return CsvData(metadata=metadata, header=header, columns=columns)


def require_columns(data: CsvData, names, path="") -> None:
    """Raise a descriptive schema error naming the first missing column."""
    for name in names:
        if name not in data.columns:
            raise CsvFormatError(f"{path or 'csv'}: missing required column '{name}'")


def equal_ignoring_volatile(path_a, path_b) -> bool:
    """Byte-compare two outputs, skipping the volatile metadata lines."""

    def stable_lines(p):
        keep = []
        for line in Path(p).read_text(encoding="utf-8").splitlines():
            if any(line.startswith(f"# {k}=") for k in VOLATILE_KEYS):
                continue
            keep.append(line)
        return keep

    return stable_lines(path_a) == stable_lines(path_b)
