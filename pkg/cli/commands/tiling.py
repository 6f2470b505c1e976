"""
The tiling sub-command: build a (u, eps)-tiling of a cap or square and check its axioms.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import argparse
from pathlib import Path

from cli.responses import TilingFailureRow, TilingResponse
from engine.geometry import NORTH_POLE, Region, SphereSquare, SphericalCap, build_tiling, check_tiling
from store.keys import output_root
from store.records import write_json, write_model

from .common import emit
from .exception import EXIT_OK, EXIT_RUNTIME, handle_exceptions


def region_from_args(kind: str, radius: float) -> Region:
    if kind == "cap":
        return SphericalCap(NORTH_POLE, radius)
    return SphereSquare.at(NORTH_POLE, radius)


@handle_exceptions
def cmd_tiling(args: argparse.Namespace) -> int:
    region = region_from_args(args.region, args.radius)
    tiling = build_tiling(args.u, args.eps, region, strict=not args.lenient)
    report = check_tiling(tiling, args.seed)
    base = output_root(args.out) / "tilings"
    stem = f"{args.region}-{args.radius:g}-u{args.u:g}-eps{args.eps:g}"
    tiling_path = base / f"{stem}.json"
    write_json(tiling_path, tiling.document())
    response = TilingResponse(
        passed=report.passed,
        n=report.n,
        half_side=report.half_side,
        eps=report.eps,
        covered_fraction=report.covered_fraction,
        min_exclusive_fraction=report.min_exclusive_fraction,
        count_bound=report.count_bound,
        max_neighbors=report.max_neighbors,
        isoperimetry_trials=report.isoperimetry_trials,
        failures=[TilingFailureRow(prop=f.prop, message=f.message, witness=f.witness) for f in report.failures],
        tiling_path=str(tiling_path),
    )
    write_model(base / f"{stem}.report.json", response)
    emit(response)
    return EXIT_OK if report.passed else EXIT_RUNTIME


def register(sub: argparse._SubParsersAction) -> None:  # type: ignore[type-arg]
    p = sub.add_parser("tiling", help="build and check a (u, eps)-tiling")
    p.add_argument("--region", choices=["cap", "square"], default="cap")
    p.add_argument("--radius", type=float, required=True, help="cap radius or square half side")
    p.add_argument("--u", type=float, required=True, help="tile half side")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--lenient", action="store_true", help="build outside the feasible range and report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (default $PERCOLAB_OUTPUT_DIR or ./runs)")
    p.set_defaults(func=cmd_tiling)
