"""Rusanov two-state numerical flux with the stiff pressure split out.

The momentum flux of the scaled system carries P(rho)/eps^(2*beta); that
factor is never materialized here.  The flux is returned in three parts:
mass flux, momentum convective part (with the full dissipation on q), and
the plain pressure average.  Callers weight the pressure part with the
grouped coefficient that carries the stiffness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import BlowUpError
from .model import ModelParams

ArrayLike = Union[float, np.ndarray]

#: Densities at or below this floor carry zero velocity: truncation can
#: produce exact vacuum, and the flux contributions vanish with the density.
RHO_FLOOR = 1e-12


@dataclass(frozen=True)
class FluxPair:
    """Split interface flux: (mass, momentum convective, pressure average)."""

    f_rho: ArrayLike
    f_conv: ArrayLike
    f_prs: ArrayLike


def velocity_with_floor(rho: np.ndarray, q: np.ndarray, floor: float = RHO_FLOOR) -> np.ndarray:
    """q / rho where rho exceeds the vacuum floor, else exactly zero."""
    safe = np.where(rho > floor, rho, 1.0)
    return np.where(rho > floor, q / safe, 0.0)


def _rusanov_core(rho_l, u_l, p_l, rho_r, u_r, p_r, params: ModelParams):
    """Vectorized Rusanov flux on primitive sides (rho >= 0 assumed).

    Wave speed: max(|u| + c) over the two sides with the *unscaled*
    acoustic speed c = sqrt(gamma rho^(gamma-1)).  Deliberately so: a
    dissipation speed growing like 1/eps^beta acts on the full hydrostatic
    density jump and wrecks near-equilibrium stiff runs, while the
    relaxation terms already damp the fast acoustic modes.  The
    dissipation acts on (rho, q); the pressure average is kept apart.
    """
    gamma = params.gamma
    gm1 = gamma - 1.0
    if gamma == 1.0:
        # isothermal sound speed is density-independent
        a = np.maximum(np.abs(u_l), np.abs(u_r)) + 1.0
    else:
        c_l = np.sqrt(gamma * np.power(rho_l, gm1))
        c_r = np.sqrt(gamma * np.power(rho_r, gm1))
        a = np.maximum(np.abs(u_l) + c_l, np.abs(u_r) + c_r)
    q_l = rho_l * u_l
    q_r = rho_r * u_r
    f_rho = 0.5 * (q_l + q_r) - 0.5 * a * (rho_r - rho_l)
    f_conv = 0.5 * (q_l * u_l + q_r * u_r) - 0.5 * a * (q_r - q_l)
    f_prs = 0.5 * (p_l + p_r)
    return f_rho, f_conv, f_prs


def rusanov_flux(left, right, params: ModelParams, rho_floor: float = RHO_FLOOR) -> FluxPair:
    """Rusanov flux between two (rho, q) states (scalars or arrays).

    Consistency: at equal states the pair reduces to the pointwise physical
    flux components (q, q^2/rho, P(rho)).  Non-finite inputs raise
    BlowUpError so an upstream failure propagates instead of silently
    turning into NaN fluxes.
    """
    rho_l, q_l = (np.asarray(v, dtype=float) for v in left)
    rho_r, q_r = (np.asarray(v, dtype=float) for v in right)
    if not (
        np.all(np.isfinite(rho_l))
        and np.all(np.isfinite(q_l))
        and np.all(np.isfinite(rho_r))
        and np.all(np.isfinite(q_r))
    ):
        raise BlowUpError("non-finite state passed to rusanov_flux")
    rho_l = np.maximum(rho_l, 0.0)
    rho_r = np.maximum(rho_r, 0.0)
    u_l = velocity_with_floor(rho_l, q_l, rho_floor)
    u_r = velocity_with_floor(rho_r, q_r, rho_floor)
    p_l = np.power(rho_l, params.gamma)
    p_r = np.power(rho_r, params.gamma)
    f_rho, f_conv, f_prs = _rusanov_core(rho_l, u_l, p_l, rho_r, u_r, p_r, params)

    def out(x):
        x = np.asarray(x)
        return float(x) if x.ndim == 0 else x

    return FluxPair(f_rho=out(f_rho), f_conv=out(f_conv), f_prs=out(f_prs))
