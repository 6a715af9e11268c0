"""Finite-volume solver for the 1D scaled Euler system with gravity and
friction: a unified asymptotic-preserving, well-balanced scheme, its limit
reference solvers, and a batch experiment harness."""

from .errors import BlowUpError, ConfigError, CsvFormatError, EquilibriumNotFoundError
from .fluxes import FluxPair, rusanov_flux
from .model import (
    Grid,
    ModelParams,
    Potential,
    PotentialKind,
    State,
    StepCoefficients,
    isentropic_equilibrium,
    isothermal_equilibrium,
    pressure,
    pressure_inverse,
    psi,
    psi_inverse,
    sound_speed,
    step_coefficients,
)
from .scheme import (
    BCKind,
    Diagnostics,
    ReconstructionKind,
    RunResult,
    SchemeOptions,
    VariantKind,
    apply_bc,
    cfl_dt,
    run,
    step,
)
from .wellbalance import (
    InterfaceStates,
    build_discrete_equilibrium,
    equilibrium_residual,
    extend_equilibrium_cell,
    momentum_source,
    reconstruct_e,
    reconstruct_p,
)

__version__ = "0.1.0"

__all__ = [
    "BCKind",
    "BlowUpError",
    "ConfigError",
    "CsvFormatError",
    "Diagnostics",
    "EquilibriumNotFoundError",
    "FluxPair",
    "Grid",
    "InterfaceStates",
    "ModelParams",
    "Potential",
    "PotentialKind",
    "ReconstructionKind",
    "RunResult",
    "SchemeOptions",
    "State",
    "StepCoefficients",
    "VariantKind",
    "apply_bc",
    "build_discrete_equilibrium",
    "cfl_dt",
    "equilibrium_residual",
    "extend_equilibrium_cell",
    "isentropic_equilibrium",
    "isothermal_equilibrium",
    "momentum_source",
    "pressure",
    "pressure_inverse",
    "psi",
    "psi_inverse",
    "reconstruct_e",
    "reconstruct_p",
    "run",
    "rusanov_flux",
    "sound_speed",
    "step",
    "step_coefficients",
]
