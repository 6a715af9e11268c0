"""Reader for the solver's delimited output files.

The file contract (documented in the solver's README): UTF-8 CSV, leading
'#'-prefixed ``key=value`` metadata lines, one header row, then data rows.
Known schemas:

    profile     x,rho,q,u
    timeseries  t,max_q,l1_rho_err

This module re-implements the parsing against that contract on purpose:
the figures must depend on the files alone, not on the solver package.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

PROFILE_COLUMNS = ("x", "rho", "q", "u")
TIMESERIES_COLUMNS = ("t", "max_q", "l1_rho_err")


class SchemaError(ValueError):
    """An input file does not match the documented CSV contract."""


@dataclass
class Table:
    path: Path
    metadata: dict[str, str]
    columns: dict[str, np.ndarray]

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def label(self) -> str:
        """Legend label from the metadata echo, falling back to the stem."""
        md = self.metadata
        if "label" in md:
            return md["label"]
        parts = []
        for key in ("experiment", "eps", "beta", "cells", "recon", "variant"):
            if key in md:
                parts.append(f"{key}={md[key]}" if key != "experiment" else md[key])
        return " ".join(parts) if parts else self.path.stem


def read_table(path) -> Table:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
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
        fields = [f.strip() for f in line.split(",")]
        if header is None:
            header = fields
            continue
        if len(fields) != len(header):
            raise SchemaError(
                f"{path}:{lineno}: expected {len(header)} fields, found {len(fields)}"
            )
        rows.append(fields)
    if header is None:
        raise SchemaError(f"{path}: missing header row")
    columns: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        raw_col = [r[j] for r in rows]
        try:
            columns[name] = np.array([float(v) for v in raw_col])
        except ValueError as exc:
            raise SchemaError(f"{path}: column '{name}' is not numeric: {exc}") from None
    return Table(path=path, metadata=metadata, columns=columns)


def require_schema(table: Table, names, require_rows: bool = True) -> None:
    for name in names:
        if name not in table.columns:
            raise SchemaError(f"{table.path}: missing required column '{name}'")
    if require_rows and table.n_rows == 0:
        raise SchemaError(f"{table.path}: no data rows")
