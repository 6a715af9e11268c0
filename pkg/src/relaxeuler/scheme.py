"""The unified fully-discrete update and its time loop.

One step of the scheme, with D2 the centered second difference and the
grouped weights from ``step_coefficients``:

    rho_i <- rho_i - (a_hyp/dx) (Frho_{i+1/2} - Frho_{i-1/2})
                   + (a_kin/dx^2) D2(q^2/rho)_i
                   + (a_prs/dx^2) D2 P(rho)_i
                   - (a_grav/dx^2) [rbar_{i+1/2} dphi_{i+1/2} - rbar_{i-1/2} dphi_{i-1/2}]

    q_i   <- q_i  - (a_hyp/dx) (Fconv_{i+1/2} - Fconv_{i-1/2})
                  - (a_src/dx) (Fprs_{i+1/2} - Fprs_{i-1/2})
                  - a_fric q_i
                  + (a_src/dx) (P(rho-_{i+1/2}) - P(rho+_{i-1/2}))

The interface fluxes are Rusanov fluxes evaluated at hydrostatically
reconstructed states; with reconstruction switched off the fluxes use raw
cell values and the momentum source becomes the pointwise a_fric * rho *
dphi/dx (the non-well-balanced ablation).  All coefficients stay grouped,
so the stiff limits are reached without forming any 1/eps power.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import BlowUpError
from .fluxes import RHO_FLOOR, _rusanov_core, velocity_with_floor
from .model import (
    Grid,
    ModelParams,
    Potential,
    State,
    StepCoefficients,
    isentropic_equilibrium,
    isothermal_equilibrium,
    step_coefficients,
)
from .wellbalance import extend_equilibrium_cell


class BCKind(str, Enum):
    EXTRAPOLATION = "extrap"
    PERIODIC = "periodic"
    EQUILIBRIUM_GHOST = "equilibrium"
    #: Ghosts continue the *discrete* hydrostatic balance from the adjacent
    #: interior cell; this is the boundary treatment under which discrete
    #: steady states are preserved to round-off on a finite domain.
    DISCRETE_EQUILIBRIUM = "discrete-equilibrium"


class ReconstructionKind(str, Enum):
    P = "p"
    E = "e"
    NONE = "none"


class VariantKind(str, Enum):
    UNIFIED_AP = "ap"
    EXPLICIT_NONAP = "nonap"


@dataclass(frozen=True)
class SchemeOptions:
    """Boundary condition, reconstruction and ablation switches.

    reconstruction = NONE is the non-well-balanced ablation: fluxes at raw
    cell values and a pointwise momentum source.
    """

    bc: BCKind = BCKind.EXTRAPOLATION
    reconstruction: ReconstructionKind = ReconstructionKind.P
    variant: VariantKind = VariantKind.UNIFIED_AP
    rho_floor: float = RHO_FLOOR


def cfl_dt(grid: Grid, phi: Potential, params: ModelParams) -> float:
    """Time step lambda * min(dx^2 / eps^(1-beta), dx / max|dphi/dx|).

    The gravity bound uses the steepest interior interface slope; for a
    constant potential that bound is +inf and the parabolic bound rules.
    """
    parabolic = grid.dx * grid.dx / params.eps_1mb
    slope = phi.max_abs_slope
    hyperbolic = grid.dx / slope if slope > 0.0 else math.inf
    return params.lambda_cfl * min(parabolic, hyperbolic)


def extend_potential(phi: Potential, options: SchemeOptions) -> np.ndarray:
    """Potential samples with one ghost per side.

    Periodic runs wrap the interior samples (bitwise, so the two copies of
    the wrap interface see identical inputs and mass telescopes exactly);
    all other boundary kinds sample the analytic potential at the ghost
    centers.
    """
    if options.bc is BCKind.PERIODIC:
        inner = phi.samples
        return np.concatenate(([inner[-1]], inner, [inner[0]]))
    return phi.samples_with_ghosts


def _make_ghost_filler(
    options: SchemeOptions, params: ModelParams, phi_ext: np.ndarray
) -> Callable[[np.ndarray, np.ndarray], None]:
    """Return a function filling ghost entries of preallocated buffers."""
    bc = options.bc
    if bc is BCKind.PERIODIC:

        def fill(rho_ext, q_ext):
            rho_ext[0] = rho_ext[-2]
            rho_ext[-1] = rho_ext[1]
            q_ext[0] = q_ext[-2]
            q_ext[-1] = q_ext[1]

    elif bc is BCKind.EXTRAPOLATION:

        def fill(rho_ext, q_ext):
            rho_ext[0] = rho_ext[1]
            rho_ext[-1] = rho_ext[-2]
            q_ext[0] = q_ext[1]
            q_ext[-1] = q_ext[-2]

    elif bc is BCKind.EQUILIBRIUM_GHOST:
        if params.gamma == 1.0:
            left = isothermal_equilibrium(phi_ext[0], 1.0, params)
            right = isothermal_equilibrium(phi_ext[-1], 1.0, params)
        else:
            left = isentropic_equilibrium(phi_ext[0], 1.0, params)
            right = isentropic_equilibrium(phi_ext[-1], 1.0, params)

        def fill(rho_ext, q_ext):
            rho_ext[0] = left
            rho_ext[-1] = right
            q_ext[0] = 0.0
            q_ext[-1] = 0.0

    elif bc is BCKind.DISCRETE_EQUILIBRIUM:

        def fill(rho_ext, q_ext):
            left, right = rho_ext[1], rho_ext[-2]
            if not (left > 0.0 and right > 0.0 and math.isfinite(left + right)):
                raise BlowUpError("boundary cells left the hydrostatic branch")
            rho_ext[0] = extend_equilibrium_cell(left, phi_ext[1], phi_ext[0], params)
            rho_ext[-1] = extend_equilibrium_cell(right, phi_ext[-2], phi_ext[-1], params)
            q_ext[0] = 0.0
            q_ext[-1] = 0.0

    else:  # pragma: no cover - enum is exhaustive
        raise ValueError(f"unknown boundary kind {bc!r}")
    return fill


def apply_bc(
    state: State, phi: Potential, options: SchemeOptions, params: ModelParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ghost-extend (rho, q, phi) by one cell per side according to the BC."""
    n = state.n_cells
    if n != phi.grid.n_cells:
        raise ValueError("state and potential grids disagree")
    phi_ext = extend_potential(phi, options)
    rho_ext = np.empty(n + 2)
    q_ext = np.empty(n + 2)
    rho_ext[1:-1] = state.rho
    q_ext[1:-1] = state.q
    _make_ghost_filler(options, params, phi_ext)(rho_ext, q_ext)
    return rho_ext, q_ext, phi_ext


@dataclass(frozen=True)
class _PhiGeometry:
    """Static per-run quantities derived from the extended potential."""

    dphi: np.ndarray  # phi_{j+1} - phi_j at every interface
    drop_l: np.ndarray  # min(phi_j, phi_{j+1}) - phi_j       (<= 0)
    drop_r: np.ndarray  # min(phi_j, phi_{j+1}) - phi_{j+1}   (<= 0)
    dphi_centered: np.ndarray  # phi_{i+1} - phi_{i-1} over interior cells


def _phi_geometry(phi_ext: np.ndarray) -> _PhiGeometry:
    phi_l = phi_ext[:-1]
    phi_r = phi_ext[1:]
    phis = np.minimum(phi_l, phi_r)
    return _PhiGeometry(
        dphi=phi_r - phi_l,
        drop_l=phis - phi_l,
        drop_r=phis - phi_r,
        dphi_centered=phi_ext[2:] - phi_ext[:-2],
    )


def _pow(x: np.ndarray, e: float) -> np.ndarray:
    # pow(x, 1) == x bitwise; skipping the transcendental call matters in
    # the multi-million-step runs.
    return x if e == 1.0 else np.power(x, e)


def _step_arrays(
    rho_ext: np.ndarray,
    q_ext: np.ndarray,
    phi_ext: np.ndarray,
    dx: float,
    co: StepCoefficients,
    params: ModelParams,
    options: SchemeOptions,
    geom: _PhiGeometry | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """One update on ghost-extended arrays; returns the interior arrays."""
    gamma = params.gamma
    floor = options.rho_floor
    recon = options.reconstruction
    if recon is ReconstructionKind.E and gamma <= 1.0:
        raise ValueError("E-reconstruction requires gamma > 1")
    if geom is None:
        geom = _phi_geometry(phi_ext)

    # Overflow/invalid are expected transients of a blowing-up run; the
    # caller holds the errstate guard and checks the output for finiteness.
    rho_pos = np.maximum(rho_ext, 0.0)
    p_ext = _pow(rho_pos, gamma)
    u_ext = velocity_with_floor(rho_ext, q_ext, floor)
    k_ext = q_ext * u_ext  # q^2/rho with the vacuum floor applied

    rho_l = rho_pos[:-1]
    rho_r = rho_pos[1:]
    rbar = 0.5 * (rho_l + rho_r)

    if recon is ReconstructionKind.P:
        e1mb = params.eps_1mb
        pm = np.maximum(e1mb * p_ext[:-1] + rbar * geom.drop_l, 0.0)
        pp = np.maximum(e1mb * p_ext[1:] + rbar * geom.drop_r, 0.0)
        if e1mb != 1.0:
            pm = pm / e1mb
            pp = pp / e1mb
        rm = _pow(pm, 1.0 / gamma)
        rp = _pow(pp, 1.0 / gamma)
    elif recon is ReconstructionKind.E:
        e1mb = params.eps_1mb
        gfac = gamma / (gamma - 1.0)
        psi_ext = gfac * np.power(rho_pos, gamma - 1.0)
        sm = np.maximum(e1mb * psi_ext[:-1] + geom.drop_l, 0.0)
        sp = np.maximum(e1mb * psi_ext[1:] + geom.drop_r, 0.0)
        if e1mb != 1.0:
            sm = sm / e1mb
            sp = sp / e1mb
        rm = np.power(sm / gfac, 1.0 / (gamma - 1.0))
        rp = np.power(sp / gfac, 1.0 / (gamma - 1.0))
        pm = np.power(rm, gamma)
        pp = np.power(rp, gamma)
    else:
        rm = rho_l
        rp = rho_r
        pm = p_ext[:-1]
        pp = p_ext[1:]

    um = u_ext[:-1]
    up = u_ext[1:]
    f_rho, f_conv, f_prs = _rusanov_core(rm, um, pm, rp, up, pp, params)

    inv_dx = 1.0 / dx
    inv_dx2 = inv_dx * inv_dx
    lap_k = k_ext[2:] - 2.0 * k_ext[1:-1] + k_ext[:-2]
    lap_p = p_ext[2:] - 2.0 * p_ext[1:-1] + p_ext[:-2]
    gflux = rbar * geom.dphi  # averaged gravity flux rbar * dphi per interface
    grav = gflux[1:] - gflux[:-1]

    rho_new = (
        rho_ext[1:-1]
        - (co.a_hyp * inv_dx) * (f_rho[1:] - f_rho[:-1])
        + (co.a_kin * inv_dx2) * lap_k
        + (co.a_prs * inv_dx2) * lap_p
        - (co.a_grav * inv_dx2) * grav
    )
    if recon is ReconstructionKind.NONE:
        source = co.a_fric * rho_ext[1:-1] * geom.dphi_centered * (0.5 * inv_dx)
    else:
        source = (co.a_src * inv_dx) * (pm[1:] - pp[:-1])
    q_new = (
        q_ext[1:-1]
        - (co.a_hyp * inv_dx) * (f_conv[1:] - f_conv[:-1])
        - (co.a_src * inv_dx) * (f_prs[1:] - f_prs[:-1])
        - co.a_fric * q_ext[1:-1]
        + source
    )
    return rho_new, q_new


def step(
    state: State, phi: Potential, dt: float, params: ModelParams, options: SchemeOptions
) -> State:
    """Advance the state by one time step of size dt.

    dt is expected to come from ``cfl_dt`` (or smaller).  A step producing
    NaN/Inf raises BlowUpError; the time loop attaches the step index.
    """
    co = step_coefficients(params, dt)
    rho_ext, q_ext, phi_ext = apply_bc(state, phi, options, params)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        rho_new, q_new = _step_arrays(
            rho_ext, q_ext, phi_ext, phi.grid.dx, co, params, options
        )
    if not (np.all(np.isfinite(rho_new)) and np.all(np.isfinite(q_new))):
        raise BlowUpError("time step produced non-finite values")
    return State(rho_new, q_new)


@dataclass
class Diagnostics:
    """Run bookkeeping: step count, wall time, density range, mass trace."""

    steps: int = 0
    wall_time: float = 0.0
    dt: float = 0.0
    rho_min: float = math.inf
    rho_max: float = -math.inf
    mass_trace: list[tuple[float, float]] = field(default_factory=list)


@dataclass
class RunResult:
    state: State
    diagnostics: Diagnostics


def plan_steps(t_final: float, dt: float) -> tuple[int, float]:
    """Number of full steps and the clipped remainder landing on t_final."""
    n_full = int(math.floor(t_final / dt))
    remainder = t_final - n_full * dt
    if remainder >= dt:  # floor artefact when t_final/dt is a hair above an integer
        n_full += 1
        remainder = t_final - n_full * dt
    if remainder < 0.0:
        remainder = 0.0
    return n_full, remainder


def run(
    initial: State,
    phi: Potential,
    t_final: float,
    params: ModelParams,
    options: SchemeOptions,
    diag_stride: int = 1000,
    observer: Optional[Callable[[float, np.ndarray, np.ndarray], None]] = None,
    observer_stride: int = 1,
) -> RunResult:
    """Advance from t = 0 to exactly t_final with the CFL time step.

    The last step is clipped to land on t_final.  Diagnostics are recorded
    every diag_stride steps (and at the end); an optional observer is
    called every observer_stride steps with (t, rho, q) views that must be
    consumed immediately.  Blow-up raises BlowUpError carrying the step
    index and time of failure.
    """
    if t_final < 0.0:
        raise ValueError("t_final must be nonnegative")
    grid = phi.grid
    if initial.n_cells != grid.n_cells:
        raise ValueError("initial state does not match the potential's grid")
    dx = grid.dx
    diag = Diagnostics()
    start = time.perf_counter()

    if t_final == 0.0:
        out = initial.copy()
        diag.rho_min = float(np.min(out.rho))
        diag.rho_max = float(np.max(out.rho))
        diag.mass_trace.append((0.0, float(np.sum(out.rho)) * dx))
        diag.wall_time = time.perf_counter() - start
        return RunResult(out, diag)

    dt = cfl_dt(grid, phi, params)
    use_nonap = options.variant is VariantKind.EXPLICIT_NONAP
    if use_nonap:
        from .reference import _nonap_arrays  # local import keeps modules acyclic
    co = step_coefficients(params, dt)
    diag.dt = dt
    n_full, remainder = plan_steps(t_final, dt)

    n = grid.n_cells
    rho_ext = np.empty(n + 2)
    q_ext = np.empty(n + 2)
    rho_ext[1:-1] = initial.rho
    q_ext[1:-1] = initial.q
    phi_ext = extend_potential(phi, options)
    fill_ghosts = _make_ghost_filler(options, params, phi_ext)
    geom = _phi_geometry(phi_ext)

    diag.mass_trace.append((0.0, float(np.sum(initial.rho)) * dx))
    total_steps = n_full + (1 if remainder > 0.0 else 0)

    t = 0.0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for k in range(total_steps):
            last = k == n_full  # only reachable when remainder > 0
            dt_k = remainder if last else dt
            co_k = step_coefficients(params, dt_k) if last else co
            fill_ghosts(rho_ext, q_ext)
            if use_nonap:
                rho_new, q_new = _nonap_arrays(rho_ext, q_ext, phi_ext, dt_k, dx, params)
            else:
                rho_new, q_new = _step_arrays(
                    rho_ext, q_ext, phi_ext, dx, co_k, params, options, geom
                )
            t = t_final if (last or (k + 1 == total_steps and remainder == 0.0)) else (k + 1) * dt
            # Sums propagate NaN/Inf, so one reduction per field detects
            # blow-up without a full isfinite scan every step.
            if not math.isfinite(float(rho_new.sum()) + float(q_new.sum())):
                raise BlowUpError("solver state became non-finite", step_index=k + 1, time=t)
            rho_ext[1:-1] = rho_new
            q_ext[1:-1] = q_new
            done = k + 1 == total_steps
            if (k + 1) % diag_stride == 0 or done:
                diag.rho_min = min(diag.rho_min, float(np.min(rho_new)))
                diag.rho_max = max(diag.rho_max, float(np.max(rho_new)))
                diag.mass_trace.append((t, float(np.sum(rho_new)) * dx))
            if observer is not None and ((k + 1) % observer_stride == 0 or done):
                observer(t, rho_ext[1:-1], q_ext[1:-1])

    diag.steps = total_steps
    diag.wall_time = time.perf_counter() - start
    return RunResult(State(rho_ext[1:-1].copy(), q_ext[1:-1].copy()), diag)
