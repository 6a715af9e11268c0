"""Experiment drivers: shock tube, hydrostatic error tables, perturbation
evolution, long-time relaxation, and the mesh-sensitivity sweep.

Each driver takes an ExperimentConfig, runs the solver (and, where the
comparison calls for it, a limit reference solver), writes CSV files under
the output directory, and returns a small result object with the numbers
the tests assert on.  Drivers are deterministic: a fixed configuration
reproduces its outputs byte for byte apart from the wall-time metadata.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .csvio import PROFILE_COLUMNS, TABLE_COLUMNS, TIMESERIES_COLUMNS, write_csv
from .errors import BlowUpError, ConfigError
from .model import (
    Grid,
    ModelParams,
    Potential,
    PotentialKind,
    State,
    isentropic_equilibrium,
    isothermal_equilibrium,
    pressure,
)
from .reference import porous_medium_step, transport_limit_step, transport_upwind_step
from .scheme import (
    BCKind,
    ReconstructionKind,
    SchemeOptions,
    VariantKind,
    cfl_dt,
    extend_potential,
    plan_steps,
    run,
)

VERSION_TAG = "relaxeuler-0.1.0"

_POTENTIALS = {k.value: k for k in PotentialKind}
_BCS = {k.value: k for k in BCKind}
_RECONS = {k.value: k for k in ReconstructionKind}
_VARIANTS = {k.value: k for k in VariantKind}

EPS_SWEEP = (1.0, 0.1, 0.01, 0.001)
POTENTIAL_SWEEP = ("linear", "quadratic", "sine")
CELLS_SWEEP = (100, 1000)
MESH_DX_SWEEP = (0.01, 0.001, 0.0001)


@dataclass
class ExperimentConfig:
    """Resolved or partially-resolved settings for one experiment.

    Fields left at None take the experiment's own default (and, for eps /
    potential / cells / beta in the sweep experiments, None means "sweep
    the full list").
    """

    experiment: str = "run"
    eps: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None
    cells: Optional[int] = None
    t_final: Optional[float] = None
    potential: Optional[str] = None
    bc: Optional[str] = None
    recon: Optional[str] = None
    variant: Optional[str] = None
    zeta: Optional[float] = None
    cfl: Optional[float] = None
    out: str = "results"
    fast: bool = False
    init: str = "sod"
    jobs: int = 1
    verbose: bool = True

    def resolved(self, **defaults) -> "ExperimentConfig":
        """Fill unset fields from the experiment defaults."""
        updates = {k: v for k, v in defaults.items() if getattr(self, k) is None}
        return replace(self, **updates)


@dataclass
class ErrorRecord:
    """One hydrostatic-table cell: L1 errors against the exact equilibrium."""

    epsilon: float
    potential: str
    n_cells: int
    l1_rho: float
    l1_q: float


def l1_error(numeric: np.ndarray, exact: np.ndarray, dx: float) -> float:
    """Discrete L1 norm dx * sum |numeric - exact|."""
    numeric = np.asarray(numeric, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if numeric.shape != exact.shape:
        raise ValueError(f"length mismatch: {numeric.shape} vs {exact.shape}")
    return float(dx * np.sum(np.abs(numeric - exact)))


def restrict(fine: np.ndarray, factor: int) -> np.ndarray:
    """Conservative restriction: average blocks of `factor` fine cells."""
    fine = np.asarray(fine, dtype=float)
    if fine.size % factor:
        raise ValueError("fine grid size is not a multiple of the factor")
    return fine.reshape(-1, factor).mean(axis=1)


def total_variation(values: np.ndarray) -> float:
    return float(np.sum(np.abs(np.diff(np.asarray(values, dtype=float)))))


# ---------------------------------------------------------------------------
# initial data


def sod_initial(grid: Grid) -> State:
    """Two-state Riemann data (1 | 0.125) split at the domain midpoint."""
    x = grid.centers
    mid = 0.5 * (grid.a + grid.b)
    return State(np.where(x < mid, 1.0, 0.125), np.zeros(grid.n_cells))


def arch_initial(grid: Grid) -> State:
    """Centered arch: density 1 inside |x| < 0.2, 2 outside."""
    x = grid.centers
    return State(np.where(np.abs(x) < 0.2, 1.0, 2.0), np.zeros(grid.n_cells))


def equilibrium_density(phi_values: np.ndarray, params: ModelParams) -> np.ndarray:
    """Analytic hydrostatic density with unit integration constant."""
    if params.gamma == 1.0:
        return isothermal_equilibrium(phi_values, 1.0, params)
    return isentropic_equilibrium(phi_values, 1.0, params)


def perturbed_equilibrium(grid: Grid, potential: Potential, params: ModelParams,
                          zeta: float) -> State:
    """Equilibrium density plus a Gaussian bump of amplitude zeta."""
    rho = equilibrium_density(potential.samples, params)
    x = grid.centers
    return State(rho + zeta * np.exp(-100.0 * (x - 0.5) ** 2), np.zeros(grid.n_cells))


# ---------------------------------------------------------------------------
# shared plumbing


def _parse(kinds: dict, name: str, what: str):
    try:
        return kinds[name]
    except KeyError:
        raise ConfigError(f"unknown {what} '{name}' (choose from {sorted(kinds)})") from None


def _setup(cfg: ExperimentConfig):
    """Params, grid, potential and options from a fully resolved config."""
    if cfg.t_final is None or cfg.t_final <= 0.0:
        raise ConfigError(f"t_final must be positive, got {cfg.t_final}")
    if cfg.cells is None or cfg.cells < 3:
        raise ConfigError(f"cells must be at least 3, got {cfg.cells}")
    try:
        params = ModelParams(
            epsilon=cfg.eps, beta=cfg.beta, gamma=cfg.gamma, lambda_cfl=cfg.cfl
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    a, b = _domain(cfg)
    grid = Grid(a, b, cfg.cells)
    potential = Potential(_parse(_POTENTIALS, cfg.potential, "potential"), grid)
    options = SchemeOptions(
        bc=_parse(_BCS, cfg.bc, "boundary condition"),
        reconstruction=_parse(_RECONS, cfg.recon, "reconstruction"),
        variant=_parse(_VARIANTS, cfg.variant, "variant"),
    )
    return params, grid, potential, options


def _domain(cfg: ExperimentConfig) -> tuple[float, float]:
    if cfg.experiment == "mesh-sweep" or (cfg.experiment == "run" and cfg.init == "arch"):
        return -0.5, 0.5
    return 0.0, 1.0


def _metadata(cfg: ExperimentConfig, **extra) -> dict:
    md = {
        "experiment": cfg.experiment,
        "eps": cfg.eps,
        "beta": cfg.beta,
        "gamma": cfg.gamma,
        "cells": cfg.cells,
        "t_final": cfg.t_final,
        "potential": cfg.potential,
        "bc": cfg.bc,
        "recon": cfg.recon,
        "variant": cfg.variant,
        "zeta": cfg.zeta,
        "cfl": cfg.cfl,
    }
    md = {k: v for k, v in md.items() if v is not None}
    md.update(extra)
    md["version"] = VERSION_TAG
    return md


def _profile_rows(grid: Grid, rho: np.ndarray, q: np.ndarray):
    u = np.where(rho > 1e-12, q / np.where(rho > 1e-12, rho, 1.0), 0.0)
    return list(zip(grid.centers, rho, q, u))


def _announce(cfg: ExperimentConfig, label: str, grid: Grid, potential: Potential,
              params: ModelParams, t_final: float) -> None:
    if not cfg.verbose:
        return
    dt = cfl_dt(grid, potential, params)
    n_full, rem = plan_steps(t_final, dt)
    steps = n_full + (1 if rem > 0.0 else 0)
    print(f"[{cfg.experiment}] {label}: dt = {dt:.3e}, ~{steps} steps to T = {t_final:g}")


def projected_steps(grid: Grid, potential: Potential, params: ModelParams,
                    t_final: float) -> int:
    n_full, rem = plan_steps(t_final, cfl_dt(grid, potential, params))
    return n_full + (1 if rem > 0.0 else 0)


def run_density_reference(
    kind: str,
    rho0: np.ndarray,
    potential: Potential,
    t_final: float,
    params: ModelParams,
    bc: BCKind = BCKind.EXTRAPOLATION,
) -> np.ndarray:
    """Integrate one of the density-only limit solvers to t_final.

    kind: 'porous' (parabolic limit), 'transport-limit' (averaged flux), or
    'transport-upwind' (donor cell).  Uses the same CFL time step and ghost
    conventions as the main scheme so regime comparisons see identical
    sampling.
    """
    grid = potential.grid
    dx = grid.dx
    dt = cfl_dt(grid, potential, params)
    n_full, rem = plan_steps(t_final, dt)
    phi_ext = extend_potential(potential, SchemeOptions(bc=bc))
    if bc is BCKind.EQUILIBRIUM_GHOST:
        ghost = (
            equilibrium_density(phi_ext[0], params),
            equilibrium_density(phi_ext[-1], params),
        )
    rho = np.asarray(rho0, dtype=float).copy()
    ext = np.empty(rho.size + 2)

    def fill(rho):
        ext[1:-1] = rho
        if bc is BCKind.PERIODIC:
            ext[0] = rho[-1]
            ext[-1] = rho[0]
        elif bc is BCKind.EQUILIBRIUM_GHOST:
            ext[0], ext[-1] = ghost
        else:
            ext[0] = rho[0]
            ext[-1] = rho[-1]
        return ext

    steps = [dt] * n_full + ([rem] if rem > 0.0 else [])
    for dt_k in steps:
        e = fill(rho)
        if kind == "porous":
            rho = porous_medium_step(e, phi_ext, dt_k, dx, params.gamma)
        elif kind == "transport-limit":
            rho = transport_limit_step(e, phi_ext, dt_k, dx)
        elif kind == "transport-upwind":
            rho = transport_upwind_step(e, phi_ext, dt_k, dx)
        else:
            raise ConfigError(f"unknown reference kind '{kind}'")
    return rho


def limit_momentum(rho: np.ndarray, potential: Potential, params: ModelParams) -> np.ndarray:
    """Momentum of the relaxed dynamics: rho phi_x minus, in the parabolic
    scaling, the pressure gradient (centered differences)."""
    phi_ext = potential.samples_with_ghosts
    rho_ext = np.concatenate(([rho[0]], rho, [rho[-1]]))
    dx = potential.grid.dx
    dphi = (phi_ext[2:] - phi_ext[:-2]) / (2.0 * dx)
    q = rho * dphi
    if params.beta == 1.0:
        p = pressure(np.maximum(rho_ext, 0.0), params.gamma)
        q = q - (p[2:] - p[:-2]) / (2.0 * dx)
    return q


# ---------------------------------------------------------------------------
# experiments


@dataclass
class SodResult:
    paths: list[Path]
    state: Optional[State]
    reference_rho: Optional[np.ndarray] = None
    reference_kind: Optional[str] = None
    l1_vs_reference: Optional[float] = None
    fine_state: Optional[State] = None
    blowup: Optional[BlowUpError] = None


def sod_experiment(cfg: ExperimentConfig) -> SodResult:
    """Shock tube under a gravitational potential, with the matching limit
    reference in the stiff regime (eps <= 0.01)."""
    cfg = cfg.resolved(
        eps=1.0, beta=1.0, gamma=1.0, cells=100, t_final=0.2,
        potential="linear", bc="extrap", recon="p", variant="ap",
        zeta=0.0, cfl=0.45,
    )
    params, grid, potential, options = _setup(cfg)
    out = Path(cfg.out)
    stem = f"sod_eps{cfg.eps:g}_beta{cfg.beta:g}"
    _announce(cfg, f"N={cfg.cells}", grid, potential, params, cfg.t_final)

    paths: list[Path] = []
    try:
        result = run(sod_initial(grid), potential, cfg.t_final, params, options)
    except BlowUpError as exc:
        md = _metadata(cfg, blowup_step=exc.step_index, blowup_time=exc.time)
        paths.append(write_csv(out / f"{stem}_N{cfg.cells}.csv", PROFILE_COLUMNS, [], md))
        return SodResult(paths=paths, state=None, blowup=exc)

    md = _metadata(cfg, steps=result.diagnostics.steps,
                   wall_time=f"{result.diagnostics.wall_time:.3f}")
    paths.append(
        write_csv(out / f"{stem}_N{cfg.cells}.csv", PROFILE_COLUMNS,
                  _profile_rows(grid, result.state.rho, result.state.q), md)
    )

    fine_state = None
    if cfg.eps == 1.0 and not cfg.fast and cfg.cells != 1000:
        fine_cfg = replace(cfg, cells=1000)
        fparams, fgrid, fpot, fopts = _setup(fine_cfg)
        _announce(cfg, "N=1000 companion", fgrid, fpot, fparams, cfg.t_final)
        fres = run(sod_initial(fgrid), fpot, cfg.t_final, fparams, fopts)
        fmd = _metadata(fine_cfg, steps=fres.diagnostics.steps,
                        wall_time=f"{fres.diagnostics.wall_time:.3f}")
        paths.append(
            write_csv(out / f"{stem}_N1000.csv", PROFILE_COLUMNS,
                      _profile_rows(fgrid, fres.state.rho, fres.state.q), fmd)
        )
        fine_state = fres.state

    ref_rho = None
    ref_kind = None
    l1 = None
    if cfg.eps <= 0.01:
        ref_kind = "porous" if cfg.beta == 1.0 else "transport-upwind"
        ref_rho = run_density_reference(
            ref_kind, sod_initial(grid).rho, potential, cfg.t_final, params,
            bc=options.bc,
        )
        l1 = l1_error(result.state.rho, ref_rho, grid.dx)
        q_ref = limit_momentum(ref_rho, potential, params)
        rmd = _metadata(cfg, reference=ref_kind, l1_vs_reference=l1)
        paths.append(
            write_csv(out / f"{stem}_N{cfg.cells}_ref.csv", PROFILE_COLUMNS,
                      _profile_rows(grid, ref_rho, q_ref), rmd)
        )

    return SodResult(paths=paths, state=result.state, reference_rho=ref_rho,
                     reference_kind=ref_kind, l1_vs_reference=l1,
                     fine_state=fine_state)


@dataclass
class HydroTableResult:
    path: Path
    records: list[ErrorRecord]
    blowups: list[tuple[float, str, int]]


def _hydro_cell(job) -> tuple[ErrorRecord, Optional[tuple[float, str, int]]]:
    """One (eps, potential, cells) table cell; module-level for pickling."""
    cfg, eps, pot_name, cells = job
    cell_cfg = replace(cfg, eps=eps, potential=pot_name, cells=cells)
    params, grid, potential, options = _setup(cell_cfg)
    rho_e = equilibrium_density(potential.samples, params)
    initial = State(rho_e.copy(), np.zeros(grid.n_cells))
    try:
        result = run(initial, potential, cell_cfg.t_final, params, options)
    except BlowUpError:
        return (
            ErrorRecord(eps, pot_name, cells, math.nan, math.nan),
            (eps, pot_name, cells),
        )
    rec = ErrorRecord(
        epsilon=eps,
        potential=pot_name,
        n_cells=cells,
        l1_rho=l1_error(result.state.rho, rho_e, grid.dx),
        l1_q=l1_error(result.state.q, np.zeros_like(rho_e), grid.dx),
    )
    return rec, None


def hydro_table_experiment(cfg: ExperimentConfig) -> HydroTableResult:
    """L1 equilibrium-preservation errors over eps x potential x resolution.

    gamma = 1 runs the isothermal family, gamma > 1 the isentropic one; the
    initial data is the analytic equilibrium sampled at cell centers with
    zero momentum and equilibrium-interpolated ghost cells.
    """
    cfg = cfg.resolved(
        beta=1.0, gamma=1.0, t_final=2.0, bc="equilibrium", recon="p",
        variant="ap", cfl=0.45, zeta=0.0,
    )
    eps_list = [cfg.eps] if cfg.eps is not None else list(EPS_SWEEP)
    pot_list = [cfg.potential] if cfg.potential is not None else list(POTENTIAL_SWEEP)
    cells_list = (
        [cfg.cells] if cfg.cells is not None
        else ([100] if cfg.fast else list(CELLS_SWEEP))
    )
    jobs = [
        (cfg, eps, pot, cells)
        for eps in eps_list for pot in pot_list for cells in cells_list
    ]
    if cfg.verbose:
        for _, eps, pot, cells in jobs:
            c = replace(cfg, eps=eps, potential=pot, cells=cells)
            params, grid, potential, _ = _setup(c)
            _announce(c, f"eps={eps:g} {pot} N={cells}", grid, potential, params, c.t_final)

    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(_hydro_cell, jobs))
    else:
        outcomes = [_hydro_cell(j) for j in jobs]

    records = [rec for rec, _ in outcomes]
    blowups = [b for _, b in outcomes if b is not None]
    rows = [
        (r.epsilon, r.potential, r.n_cells, r.l1_rho, r.l1_q) for r in records
    ]
    md = _metadata(cfg)
    if blowups:
        md["blowups"] = ";".join(f"eps={e:g}:{p}:N={n}" for e, p, n in blowups)
    path = write_csv(
        Path(cfg.out) / f"hydro_table_gamma{cfg.gamma:g}.csv", TABLE_COLUMNS, rows, md
    )
    return HydroTableResult(path=path, records=records, blowups=blowups)


@dataclass
class PerturbResult:
    paths: list[Path]
    wb_state: State
    nonwb_state: State
    rho_equilibrium: np.ndarray
    max_err_wb: float
    max_err_nonwb: float
    l1_err_wb: float
    l1_err_nonwb: float


def perturb_experiment(cfg: ExperimentConfig) -> PerturbResult:
    """Evolution of a Gaussian density perturbation on a hydrostatic
    background, run with and without the equilibrium reconstruction."""
    cfg = cfg.resolved(
        eps=1.0, beta=1.0, gamma=1.0, cells=100, t_final=0.25,
        potential="linear", bc="equilibrium", recon="p", variant="ap",
        zeta=1e-3, cfl=0.45,
    )
    if cfg.beta != 1.0:
        raise ConfigError("perturbation experiment requires beta = 1")
    params, grid, potential, options = _setup(cfg)
    rho_e = equilibrium_density(potential.samples, params)
    initial = perturbed_equilibrium(grid, potential, params, cfg.zeta)
    _announce(cfg, f"zeta={cfg.zeta:g}, two variants", grid, potential, params, cfg.t_final)

    out = Path(cfg.out)
    paths = []
    states = {}
    for label, recon in (("wb", ReconstructionKind.P), ("nonwb", ReconstructionKind.NONE)):
        opts = SchemeOptions(bc=options.bc, reconstruction=recon, variant=options.variant)
        res = run(initial.copy(), potential, cfg.t_final, params, opts)
        states[label] = res.state
        md = _metadata(replace(cfg, recon=recon.value), steps=res.diagnostics.steps,
                       wall_time=f"{res.diagnostics.wall_time:.3f}")
        paths.append(
            write_csv(out / f"perturb_{label}.csv", PROFILE_COLUMNS,
                      _profile_rows(grid, res.state.rho, res.state.q), md)
        )
        dmd = dict(md)
        dmd["field"] = "delta_rho"
        paths.append(
            write_csv(out / f"perturb_{label}_delta.csv", PROFILE_COLUMNS,
                      _profile_rows(grid, res.state.rho - rho_e, res.state.q), dmd)
        )

    def max_err(s):
        return float(np.max(np.abs(s.rho - rho_e)))

    return PerturbResult(
        paths=paths,
        wb_state=states["wb"],
        nonwb_state=states["nonwb"],
        rho_equilibrium=rho_e,
        max_err_wb=max_err(states["wb"]),
        max_err_nonwb=max_err(states["nonwb"]),
        l1_err_wb=l1_error(states["wb"].rho, rho_e, grid.dx),
        l1_err_nonwb=l1_error(states["nonwb"].rho, rho_e, grid.dx),
    )


@dataclass
class LongtimeRecord:
    epsilon: float
    variant: str
    final_max_q: float
    final_l1_rho: float
    path: Optional[Path]


@dataclass
class LongtimeResult:
    records: list[LongtimeRecord]


def longtime_experiment(cfg: ExperimentConfig) -> LongtimeResult:
    """Relaxation toward the hydrostatic state over a long horizon,
    recording max|q| and the L1 density error as time series."""
    cfg = cfg.resolved(
        beta=1.0, gamma=1.0, cells=100, t_final=100.0,
        potential="linear", bc="equilibrium", recon="p", variant="ap",
        zeta=1e-3, cfl=0.45,
    )
    if cfg.beta != 1.0:
        raise ConfigError("long-time experiment requires beta = 1")
    eps_list = [cfg.eps] if cfg.eps is not None else list(EPS_SWEEP)
    out = Path(cfg.out)
    records = []
    for eps in eps_list:
        cell_cfg = replace(cfg, eps=eps)
        params, grid, potential, options = _setup(cell_cfg)
        rho_e = equilibrium_density(potential.samples, params)
        initial = perturbed_equilibrium(grid, potential, params, cfg.zeta)
        total = projected_steps(grid, potential, params, cfg.t_final)
        stride = max(1, total // 2000)
        _announce(cell_cfg, f"eps={eps:g}", grid, potential, params, cfg.t_final)
        for label, recon in (("wb", ReconstructionKind.P), ("nonwb", ReconstructionKind.NONE)):
            opts = SchemeOptions(bc=options.bc, reconstruction=recon)
            series: list[tuple[float, float, float]] = []

            def record(t, rho, q):
                series.append(
                    (t, float(np.max(np.abs(q))), l1_error(rho, rho_e, grid.dx))
                )

            path = out / f"longtime_eps{eps:g}_{label}.csv"
            try:
                res = run(initial.copy(), potential, cfg.t_final, params, opts,
                          observer=record, observer_stride=stride)
                md = _metadata(replace(cell_cfg, recon=recon.value),
                               steps=res.diagnostics.steps,
                               wall_time=f"{res.diagnostics.wall_time:.3f}")
                write_csv(path, TIMESERIES_COLUMNS, series, md)
                records.append(LongtimeRecord(eps, label, series[-1][1], series[-1][2], path))
            except BlowUpError as exc:
                md = _metadata(replace(cell_cfg, recon=recon.value),
                               blowup_step=exc.step_index, blowup_time=exc.time)
                write_csv(path, TIMESERIES_COLUMNS, series, md)
                records.append(LongtimeRecord(eps, label, math.nan, math.nan, path))
    return LongtimeResult(records=records)


@dataclass
class MeshOutcome:
    beta: float
    variant: str
    dx: float
    outcome: str  # stable | oscillatory | blow-up
    tv_rho: float
    state: Optional[State]
    blowup: Optional[BlowUpError] = None


@dataclass
class MeshSweepResult:
    outcomes: list[MeshOutcome]
    pairwise_l1: dict[tuple[float, float, float], float]  # (beta, dx_coarse, dx_fine)
    summary_path: Path
    profile_paths: list[Path]


def mesh_sweep_experiment(cfg: ExperimentConfig) -> MeshSweepResult:
    """Arch relaxation across under/over-resolved meshes, unified scheme
    versus fully-explicit ablation; classifies each run as stable,
    oscillatory (total-variation ratio vs the unified run) or blow-up."""
    cfg = cfg.resolved(
        eps=1e-3, gamma=1.0, potential="sine", bc="periodic", recon="p",
        variant="ap", t_final=0.05, cfl=0.45, zeta=0.0,
    )
    betas = [cfg.beta] if cfg.beta is not None else [1.0, 0.1]
    dx_list = list(MESH_DX_SWEEP[:2] if cfg.fast else MESH_DX_SWEEP)
    out = Path(cfg.out)
    outcomes: list[MeshOutcome] = []
    pairwise: dict[tuple[float, float, float], float] = {}
    profile_paths: list[Path] = []

    for beta in betas:
        ap_states: dict[float, State] = {}
        for variant in (VariantKind.UNIFIED_AP, VariantKind.EXPLICIT_NONAP):
            for dx in dx_list:
                cells = round(1.0 / dx)
                cell_cfg = replace(cfg, beta=beta, cells=cells, variant=variant.value)
                params, grid, potential, options = _setup(cell_cfg)
                _announce(cell_cfg, f"beta={beta:g} {variant.value} dx={dx:g}",
                          grid, potential, params, cfg.t_final)
                initial = arch_initial(grid)
                try:
                    res = run(initial, potential, cfg.t_final, params, options)
                except BlowUpError as exc:
                    if variant is VariantKind.UNIFIED_AP:
                        raise  # the unified scheme is expected to survive
                    outcomes.append(MeshOutcome(beta, variant.value, dx, "blow-up",
                                                math.nan, None, exc))
                    continue
                tv = total_variation(res.state.rho)
                if variant is VariantKind.UNIFIED_AP:
                    ap_states[dx] = res.state
                    outcome = "stable"
                else:
                    tv_ap = total_variation(ap_states[dx].rho)
                    outcome = "oscillatory" if tv >= 1.5 * tv_ap else "stable"
                outcomes.append(MeshOutcome(beta, variant.value, dx, outcome,
                                            tv, res.state))
                md = _metadata(cell_cfg, outcome=outcome, tv_rho=tv,
                               steps=res.diagnostics.steps,
                               wall_time=f"{res.diagnostics.wall_time:.3f}")
                profile_paths.append(
                    write_csv(out / f"mesh_{variant.value}_beta{beta:g}_dx{dx:g}.csv",
                              PROFILE_COLUMNS,
                              _profile_rows(grid, res.state.rho, res.state.q), md)
                )
        # pairwise distances between the unified runs, fine restricted to coarse
        dxs = sorted(ap_states, reverse=True)
        for i, dc in enumerate(dxs):
            for df in dxs[i + 1:]:
                factor = round(dc / df)
                coarse = ap_states[dc].rho
                fine = restrict(ap_states[df].rho, factor)
                pairwise[(beta, dc, df)] = l1_error(coarse, fine, dc)

    rows = [(o.beta, o.variant, o.dx, o.outcome, o.tv_rho) for o in outcomes]
    md = _metadata(cfg)
    for (beta, dc, df), v in pairwise.items():
        md[f"ap_l1_beta{beta:g}_dx{dc:g}_vs_{df:g}"] = v
    summary = write_csv(out / "mesh_summary.csv",
                        ("beta", "variant", "dx", "outcome", "tv_rho"), rows, md)
    return MeshSweepResult(outcomes=outcomes, pairwise_l1=pairwise,
                           summary_path=summary, profile_paths=profile_paths)


@dataclass
class RunExperimentResult:
    path: Path
    state: Optional[State]
    steps: int
    blowup: Optional[BlowUpError] = None


def single_run_experiment(cfg: ExperimentConfig) -> RunExperimentResult:
    """One solver run with a chosen initial-data family, written as a
    profile file (the generic `run` subcommand)."""
    cfg = cfg.resolved(
        eps=1.0, beta=1.0, gamma=1.4, cells=100, t_final=0.2,
        potential="linear", bc="extrap", recon="p", variant="ap",
        zeta=1e-3, cfl=0.45,
    )
    params, grid, potential, options = _setup(cfg)
    if cfg.init == "sod":
        initial = sod_initial(grid)
    elif cfg.init == "arch":
        initial = arch_initial(grid)
    elif cfg.init == "equilibrium":
        initial = State(equilibrium_density(potential.samples, params),
                        np.zeros(grid.n_cells))
    elif cfg.init == "perturb":
        initial = perturbed_equilibrium(grid, potential, params, cfg.zeta)
    else:
        raise ConfigError(f"unknown initial data '{cfg.init}'")
    _announce(cfg, f"init={cfg.init}", grid, potential, params, cfg.t_final)
    path = Path(cfg.out) / f"run_{cfg.init}_eps{cfg.eps:g}_beta{cfg.beta:g}_N{cfg.cells}.csv"
    try:
        res = run(initial, potential, cfg.t_final, params, options)
    except BlowUpError as exc:
        md = _metadata(cfg, blowup_step=exc.step_index, blowup_time=exc.time)
        write_csv(path, PROFILE_COLUMNS, [], md)
        return RunExperimentResult(path=path, state=None, steps=0, blowup=exc)
    md = _metadata(cfg, steps=res.diagnostics.steps,
                   wall_time=f"{res.diagnostics.wall_time:.3f}")
    write_csv(path, PROFILE_COLUMNS,
              _profile_rows(grid, res.state.rho, res.state.q), md)
    return RunExperimentResult(path=path, state=res.state, steps=res.diagnostics.steps)
