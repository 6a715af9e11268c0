"""Reference limit solvers and the fully-explicit ablation scheme.

The density-only steps are the explicit discretisations the unified scheme
must reproduce as eps -> 0: centered second differences for the parabolic
limit, the averaged gravity flux for its transport part, and a donor-cell
upwind solver as an independent transport reference.  The fully-explicit
Euler step is the non-AP comparison target; it materializes the stiff
pressure and treats friction pointwise, so on under-resolved meshes it is
*meant* to blow up.

All step functions take ghost-extended arrays (one ghost per side, filled
by the caller) and return the updated interior cells.
"""

from __future__ import annotations

import numpy as np

from .errors import BlowUpError
from .fluxes import RHO_FLOOR, _rusanov_core, velocity_with_floor
from .model import ModelParams, State


def porous_medium_step(
    rho: np.ndarray, phi: np.ndarray, dt: float, dx: float, gamma: float
) -> np.ndarray:
    """Explicit step of rho_t + (rho phi_x)_x = P(rho)_xx.

    Central Laplacian of the pressure plus the averaged gravity flux.
    Stability needs dt <= lambda dx^2 (caller-enforced).
    """
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    p = np.power(np.maximum(rho, 0.0), gamma)
    lap_p = p[2:] - 2.0 * p[1:-1] + p[:-2]
    rbar = 0.5 * (rho[:-1] + rho[1:])
    dphi = np.diff(phi)
    grav = rbar[1:] * dphi[1:] - rbar[:-1] * dphi[:-1]
    return rho[1:-1] + (dt / (dx * dx)) * (lap_p - grav)


def transport_limit_step(
    rho: np.ndarray, phi: np.ndarray, dt: float, dx: float
) -> np.ndarray:
    """Explicit step of rho_t + (rho phi_x)_x = 0 with the averaged flux.

    This is the gravity part of the porous-medium step alone; for a linear
    potential it reduces to the centered transport stencil.
    """
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    rbar = 0.5 * (rho[:-1] + rho[1:])
    dphi = np.diff(phi)
    grav = rbar[1:] * dphi[1:] - rbar[:-1] * dphi[:-1]
    return rho[1:-1] - (dt / (dx * dx)) * grav


def transport_upwind_step(
    rho: np.ndarray, phi: np.ndarray, dt: float, dx: float
) -> np.ndarray:
    """Donor-cell upwind step for rho_t + (rho v)_x = 0, v = phi_x.

    Interface velocity v_{i+1/2} = (phi_{i+1} - phi_i)/dx picks the donor
    cell by its sign; monotone under the CFL bound dt <= dx / max|v|.
    """
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    v = np.diff(phi) / dx
    donor = np.where(v > 0.0, rho[:-1], rho[1:])
    flux = v * donor
    return rho[1:-1] - (dt / dx) * (flux[1:] - flux[:-1])


def _nonap_arrays(
    rho_ext: np.ndarray,
    q_ext: np.ndarray,
    phi_ext: np.ndarray,
    dt: float,
    dx: float,
    params: ModelParams,
) -> tuple[np.ndarray, np.ndarray]:
    """Fully-explicit Euler step on ghost-extended arrays.

    Rusanov flux at raw cell values with the stiff pressure included, and
    the pointwise source -(q - rho phi_x)/eps^(1+beta) with centered
    phi_x.  No attempt is made to keep this stable for small eps.
    """
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        rho_pos = np.maximum(rho_ext, 0.0)
        eps_2b = params.epsilon ** (2.0 * params.beta)
        p_stiff = np.power(rho_pos, params.gamma) / eps_2b
        u_ext = velocity_with_floor(rho_ext, q_ext, RHO_FLOOR)
        f_rho, f_conv, f_prs = _rusanov_core(
            rho_pos[:-1], u_ext[:-1], p_stiff[:-1], rho_pos[1:], u_ext[1:], p_stiff[1:], params
        )
        f_q = f_conv + f_prs
        dphi_c = (phi_ext[2:] - phi_ext[:-2]) / (2.0 * dx)
        relax = dt / params.eps_1pb
        rho_new = rho_ext[1:-1] - (dt / dx) * (f_rho[1:] - f_rho[:-1])
        q_new = (
            q_ext[1:-1]
            - (dt / dx) * (f_q[1:] - f_q[:-1])
            - relax * (q_ext[1:-1] - rho_ext[1:-1] * dphi_c)
        )
    return rho_new, q_new


def explicit_nonap_step(
    state: State, phi: np.ndarray, dt: float, dx: float, params: ModelParams
) -> State:
    """One fully-explicit Euler step; state and phi carry one ghost per side.

    Returns the interior state; NaN/Inf output raises BlowUpError (the
    driving loop attaches the step index).
    """
    rho_new, q_new = _nonap_arrays(state.rho, state.q, np.asarray(phi, dtype=float), dt, dx, params)
    if not (np.all(np.isfinite(rho_new)) and np.all(np.isfinite(q_new))):
        raise BlowUpError("explicit step produced non-finite values")
    return State(rho_new, q_new)
