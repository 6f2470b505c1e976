"""
Experiment sub-commands: estimate, giant, eu, coupling and the generic run.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import argparse
from typing import Dict, Optional

from cli.requests import FIELD_ALIASES
from engine.enums import EnsembleKind, ExperimentKind

from .common import add_ensemble_args, add_run_args, execute, resolve_config
from .exception import handle_exceptions

_PROBES = {"duality": ExperimentKind.duality, "stability": ExperimentKind.stability}


@handle_exceptions
def cmd_estimate(args: argparse.Namespace) -> int:
    """Limit densities on the planar fields: theta on Bargmann-Fock, phi on the plane wave."""
    kind: Optional[EnsembleKind] = FIELD_ALIASES.get(args.field) if args.field else None
    experiment: Optional[ExperimentKind] = None
    if kind is not None:
        experiment = ExperimentKind.theta if kind is EnsembleKind.bargmann_fock else ExperimentKind.phi
    if args.probe:
        experiment = _PROBES[args.probe]
    extra: Dict[str, object] = {
        "ensemble.kind": kind.value if kind else None,
        "radius": args.R,
        "window": args.window,
        "correction": True if args.correction else None,
        "epsilons": args.eps,
    }
    config = resolve_config(args, experiment, extra)
    return execute(config, args.dry_run)


@handle_exceptions
def cmd_giant(args: argparse.Namespace) -> int:
    extra: Dict[str, object] = {"epsilons": args.eps, "reference": args.reference}
    return execute(resolve_config(args, ExperimentKind.giant, extra), args.dry_run)


@handle_exceptions
def cmd_eu(args: argparse.Namespace) -> int:
    extra: Dict[str, object] = {"radii": args.r, "delta": args.delta}
    return execute(resolve_config(args, ExperimentKind.eu, extra), args.dry_run)


@handle_exceptions
def cmd_coupling(args: argparse.Namespace) -> int:
    extra: Dict[str, object] = {"radii": args.r}
    return execute(resolve_config(args, ExperimentKind.coupling, extra), args.dry_run)


@handle_exceptions
def cmd_run(args: argparse.Namespace) -> int:
    """Any experiment from a config file, e.g. concentration or rare events."""
    experiment = ExperimentKind(args.experiment) if args.experiment else None
    return execute(resolve_config(args, experiment), args.dry_run)


def register(sub: argparse._SubParsersAction) -> None:  # type: ignore[type-arg]
    p = sub.add_parser("estimate", help="theta / phi density estimates on the planar limit fields")
    p.add_argument("--field", choices=sorted(FIELD_ALIASES), help="bf = Bargmann-Fock, pw = plane wave")
    p.add_argument("--alpha", type=float, help="plane-wave annulus ratio")
    p.add_argument("--waves", type=int, help="plane waves per sample")
    p.add_argument("--R", type=float, help="arm radius in wavelengths")
    p.add_argument("--window", type=float, help="side of the simulation window")
    p.add_argument("--correction", action="store_true", help="also report the TruncArm-corrected density")
    p.add_argument("--probe", choices=sorted(_PROBES), help="run the duality or stability probe instead")
    p.add_argument("--eps", type=float, action="append", help="stability perturbation, repeatable")
    add_run_args(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("giant", help="largest-component areas on a spherical ensemble")
    add_ensemble_args(p)
    add_run_args(p)
    p.add_argument("--eps", type=float, action="append", help="deviation threshold, repeatable")
    p.add_argument("--reference", type=float, help="reference density for deviations")
    p.set_defaults(func=cmd_giant)

    p = sub.add_parser("eu", help="local existence-uniqueness failure sweep")
    add_ensemble_args(p)
    add_run_args(p)
    p.add_argument("--r", type=float, action="append", help="EU scale, repeatable")
    p.add_argument("--delta", type=float, help="size threshold as a fraction of r")
    p.set_defaults(func=cmd_eu)

    p = sub.add_parser("coupling", help="finite-range coupling error ladder")
    add_ensemble_args(p)
    add_run_args(p)
    p.add_argument("--r", type=float, action="append", help="range, repeatable")
    p.set_defaults(func=cmd_coupling)

    p = sub.add_parser("run", help="run any experiment from a config file")
    add_ensemble_args(p)
    add_run_args(p)
    p.add_argument("--experiment", choices=[k.value for k in ExperimentKind])
    p.set_defaults(func=cmd_run)
