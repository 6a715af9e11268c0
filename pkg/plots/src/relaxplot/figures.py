"""Figure rendering: multi-panel profile overlays and time-series plots.

Rendering is read-only over the input CSVs and deterministic: fixed DPI,
fixed SVG hash salt, no timestamps in the image metadata, so re-rendering
the same inputs reproduces the files byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .reader import (  # noqa: E402
    PROFILE_COLUMNS,
    TIMESERIES_COLUMNS,
    SchemaError,
    Table,
    read_table,
    require_schema,
)

DPI = 150
_AXIS_NAMES = {"rho": r"$\rho$", "q": "$q$", "u": "$u$", "max_q": r"$\max|q|$",
               "l1_rho_err": r"$L^1$ density error"}

matplotlib.rcParams["svg.hashsalt"] = "relaxplot"


@dataclass
class FigureSpec:
    """Inputs and layout for one figure.

    panels: column names drawn left to right (one panel each, so two or
    three entries give the 1x2 / 1x3 layouts).  labels default to each
    file's metadata echo.  formats: image types written next to out_base.
    """

    inputs: list[Path]
    out_base: Path
    panels: tuple[str, ...]
    labels: list[str] | None = None
    formats: tuple[str, ...] = ("png", "svg")
    logy: bool = False

    def __post_init__(self):
        self.inputs = [Path(p) for p in self.inputs]
        self.out_base = Path(self.out_base)
        if not self.inputs:
            raise SchemaError("no input files given")
        if self.labels is not None and len(self.labels) != len(self.inputs):
            raise SchemaError(
                f"{len(self.labels)} labels for {len(self.inputs)} inputs"
            )


def _load(spec: FigureSpec, schema) -> list[Table]:
    tables = [read_table(p) for p in spec.inputs]
    for t in tables:
        require_schema(t, schema)
    return tables


def _labels(spec: FigureSpec, tables: list[Table]) -> list[str]:
    return spec.labels if spec.labels is not None else [t.label() for t in tables]


def _save(fig, spec: FigureSpec) -> list[Path]:
    spec.out_base.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in spec.formats:
        path = spec.out_base.with_suffix(f".{fmt}")
        metadata = {"Date": None} if fmt == "svg" else {"Software": "relaxplot"}
        fig.savefig(path, dpi=DPI, metadata=metadata)
        written.append(path)
    plt.close(fig)
    return written


def _panel_grid(n_panels: int):
    fig, axes = plt.subplots(1, n_panels, figsize=(4.2 * n_panels, 3.4),
                             squeeze=False, constrained_layout=True)
    return fig, axes[0]


def render_profiles(spec: FigureSpec) -> list[Path]:
    """Overlay solution profiles, one panel per requested variable."""
    for name in spec.panels:
        if name not in PROFILE_COLUMNS[1:]:
            raise SchemaError(f"unknown profile variable '{name}'")
    tables = _load(spec, PROFILE_COLUMNS)
    labels = _labels(spec, tables)
    fig, axes = _panel_grid(len(spec.panels))
    for ax, name in zip(axes, spec.panels):
        for table, label in zip(tables, labels):
            ax.plot(table.columns["x"], table.columns[name], label=label, lw=1.2)
        ax.set_xlabel("$x$")
        ax.set_ylabel(_AXIS_NAMES.get(name, name))
        if spec.logy:
            ax.set_yscale("log")
        ax.grid(True, alpha=0.3)
    axes[0].legend(fontsize=8)
    return _save(fig, spec)


def render_timeseries(spec: FigureSpec) -> list[Path]:
    """Overlay recorded time series; error panels use a log scale."""
    for name in spec.panels:
        if name not in TIMESERIES_COLUMNS[1:]:
            raise SchemaError(f"unknown time-series variable '{name}'")
    tables = _load(spec, TIMESERIES_COLUMNS)
    t0 = tables[0].columns["t"]
    for table in tables[1:]:
        t = table.columns["t"]
        if t.shape != t0.shape or not np.array_equal(t, t0):
            raise SchemaError(
                f"{table.path}: time axis differs from {tables[0].path}"
            )
    labels = _labels(spec, tables)
    fig, axes = _panel_grid(len(spec.panels))
    for ax, name in zip(axes, spec.panels):
        for table, label in zip(tables, labels):
            ax.plot(table.columns["t"], table.columns[name], label=label, lw=1.2)
        ax.set_xlabel("$t$")
        ax.set_ylabel(_AXIS_NAMES.get(name, name))
        ax.set_yscale("log")
        ax.grid(True, alpha=0.3)
    axes[0].legend(fontsize=8)
    return _save(fig, spec)
