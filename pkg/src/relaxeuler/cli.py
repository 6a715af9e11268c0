"""Command-line entry point.

Subcommands: run, sod, hydro-table, perturb, longtime, mesh-sweep.  Every
flag can also come from a flat key=value config file (--config FILE);
explicit flags override file values, which override experiment defaults.

Exit codes: 0 success, 2 configuration error, 3 blow-up in a run where
stability was expected (the mesh sweep treats ablation blow-up as data).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import BlowUpError, ConfigError
from .harness import (
    ExperimentConfig,
    hydro_table_experiment,
    longtime_experiment,
    mesh_sweep_experiment,
    perturb_experiment,
    single_run_experiment,
    sod_experiment,
)

EXPERIMENTS = ("run", "sod", "hydro-table", "perturb", "longtime", "mesh-sweep")

_KEY_TYPES = {
    "eps": float,
    "beta": float,
    "gamma": float,
    "cells": int,
    "t-final": float,
    "potential": str,
    "bc": str,
    "recon": str,
    "variant": str,
    "zeta": float,
    "cfl": float,
    "out": str,
    "fast": bool,
    "init": str,
    "jobs": int,
}

_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def _coerce(key: str, raw: str):
    kind = _KEY_TYPES[key]
    if kind is bool:
        try:
            return _BOOL_WORDS[raw.strip().lower()]
        except KeyError:
            raise ConfigError(f"config key '{key}': expected a boolean, got '{raw}'") from None
    try:
        return kind(raw.strip())
    except ValueError:
        raise ConfigError(f"config key '{key}': cannot parse '{raw}' as {kind.__name__}") from None


def parse_config_file(path) -> dict:
    """flat key=value text; '#' starts a comment, blank lines are skipped."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    values: dict = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got '{raw.strip()}'")
        key, _, value = line.partition("=")
        key = key.strip().replace("_", "-")
        if key not in _KEY_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        values[key] = _coerce(key, value)
    return values


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="FILE", help="flat key=value config file")
    shared.add_argument("--eps", type=float, help="relaxation parameter in (0, 1]")
    shared.add_argument("--beta", type=float, help="stiffness scaling exponent in [0, 1]")
    shared.add_argument("--gamma", type=float, help="pressure-law exponent >= 1")
    shared.add_argument("--cells", type=int, help="number of mesh cells")
    shared.add_argument("--t-final", type=float, dest="t_final", help="final time")
    shared.add_argument("--potential", choices=["linear", "quadratic", "sine"])
    shared.add_argument("--bc", choices=["extrap", "periodic", "equilibrium"])
    shared.add_argument("--recon", choices=["p", "e", "none"])
    shared.add_argument("--variant", choices=["ap", "nonap"])
    shared.add_argument("--zeta", type=float, help="perturbation amplitude")
    shared.add_argument("--cfl", type=float, help="CFL safety factor in (0, 1)")
    shared.add_argument("--out", default=None, metavar="DIR", help="output directory")
    shared.add_argument("--fast", action="store_true", default=None,
                        help="trim the sweep for quick runs")
    shared.add_argument("--jobs", type=int, help="parallel workers for table sweeps")
    shared.add_argument("--quiet", action="store_true", help="suppress progress lines")

    parser = argparse.ArgumentParser(
        prog="relaxeuler",
        description="1D Euler system with gravity and friction: unified "
                    "asymptotic-preserving, well-balanced finite-volume solver.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    run_p = sub.add_parser("run", parents=[shared], help="single solver run")
    run_p.add_argument("--init", choices=["sod", "arch", "equilibrium", "perturb"],
                       default=None, help="initial data family")
    sub.add_parser("sod", parents=[shared], help="shock tube with stiff-regime references")
    sub.add_parser("hydro-table", parents=[shared],
                   help="hydrostatic L1 error table over eps/potential/resolution")
    sub.add_parser("perturb", parents=[shared],
                   help="perturbation evolution, balanced vs non-balanced")
    sub.add_parser("longtime", parents=[shared], help="long-time relaxation time series")
    sub.add_parser("mesh-sweep", parents=[shared],
                   help="mesh-sensitivity sweep, unified vs fully-explicit")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    file_values = parse_config_file(args.config) if args.config else {}

    def pick(flag_name: str, file_key: str):
        flag = getattr(args, flag_name, None)
        return flag if flag is not None else file_values.get(file_key)

    return ExperimentConfig(
        experiment=args.experiment,
        eps=pick("eps", "eps"),
        beta=pick("beta", "beta"),
        gamma=pick("gamma", "gamma"),
        cells=pick("cells", "cells"),
        t_final=pick("t_final", "t-final"),
        potential=pick("potential", "potential"),
        bc=pick("bc", "bc"),
        recon=pick("recon", "recon"),
        variant=pick("variant", "variant"),
        zeta=pick("zeta", "zeta"),
        cfl=pick("cfl", "cfl"),
        out=pick("out", "out") or "results",
        fast=bool(pick("fast", "fast")),
        init=pick("init", "init") or "sod",
        jobs=pick("jobs", "jobs") or 1,
        verbose=not getattr(args, "quiet", False),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.experiment == "run":
            result = single_run_experiment(cfg)
            if result.blowup is not None:
                print(f"blow-up: {result.blowup}", file=sys.stderr)
                return 3
            print(f"wrote {result.path} ({result.steps} steps)")
        elif cfg.experiment == "sod":
            result = sod_experiment(cfg)
            if result.blowup is not None:
                print(f"blow-up: {result.blowup}", file=sys.stderr)
                return 3
            for p in result.paths:
                print(f"wrote {p}")
            if result.l1_vs_reference is not None:
                print(f"L1 distance to {result.reference_kind} reference: "
                      f"{result.l1_vs_reference:.4e}")
        elif cfg.experiment == "hydro-table":
            result = hydro_table_experiment(cfg)
            print(f"wrote {result.path} ({len(result.records)} cells)")
            if result.blowups:
                for eps, pot, cells in result.blowups:
                    print(f"blow-up in cell eps={eps:g} {pot} N={cells}", file=sys.stderr)
                return 3
        elif cfg.experiment == "perturb":
            result = perturb_experiment(cfg)
            for p in result.paths:
                print(f"wrote {p}")
            print(f"max |rho - rho_e|: balanced {result.max_err_wb:.4e}, "
                  f"non-balanced {result.max_err_nonwb:.4e}")
        elif cfg.experiment == "longtime":
            result = longtime_experiment(cfg)
            blew = False
            for rec in result.records:
                if rec.path is not None:
                    print(f"wrote {rec.path}")
                if rec.final_max_q != rec.final_max_q:  # NaN: blow-up
                    blew = True
            if blew:
                print("blow-up in a long-time run", file=sys.stderr)
                return 3
        elif cfg.experiment == "mesh-sweep":
            result = mesh_sweep_experiment(cfg)
            for o in result.outcomes:
                print(f"beta={o.beta:g} {o.variant} dx={o.dx:g}: {o.outcome}")
            print(f"wrote {result.summary_path}")
        else:  # pragma: no cover - argparse restricts choices
            raise ConfigError(f"unknown experiment '{cfg.experiment}'")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except BlowUpError as exc:
        print(f"unexpected blow-up: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
