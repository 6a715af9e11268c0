"""Failure signals shared across the solver and the experiment harness."""

from __future__ import annotations


class BlowUpError(RuntimeError):
    """A computation produced NaN/Inf (or was fed a non-finite state).

    Carries the step index and simulation time of the first detection when
    raised from a time loop; both stay None for single evaluations.
    """

    def __init__(self, message: str, step_index: int | None = None,
                 time: float | None = None):
        super().__init__(message)
        self.step_index = step_index
        self.time = time

    def __str__(self) -> str:
        extra = []
        if self.step_index is not None:
            extra.append(f"step {self.step_index}")
        if self.time is not None:
            extra.append(f"t = {self.time:.6g}")
        base = super().__str__()
        return f"{base} ({', '.join(extra)})" if extra else base


class EquilibriumNotFoundError(ValueError):
    """No positive root of the discrete hydrostatic balance exists."""


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class CsvFormatError(ValueError):
    """A delimited output file does not match the documented schema."""
