"""Static figure generation for relaxeuler CSV outputs."""

from .figures import FigureSpec, render_profiles, render_timeseries
from .reader import SchemaError, Table, read_table

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "SchemaError",
    "Table",
    "read_table",
    "render_profiles",
    "render_timeseries",
]
