"""
Shared argument groups, config resolution and output helpers for sub-commands.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Dict, Mapping, Optional

from pydantic import BaseModel

from cli.requests import EnsembleConfig, ExperimentConfig
from engine.enums import Connectivity, EnsembleKind, ExperimentKind
from services.config_service import config_service
from services.experiment_service import RunResult, run_experiment_sync

from .exception import EXIT_OK

log = logging.getLogger(__name__)


def add_ensemble_args(parser: argparse.ArgumentParser, required: bool = False) -> None:
    group = parser.add_argument_group("ensemble")
    group.add_argument("--ensemble", choices=[k.value for k in EnsembleKind], required=required)
    group.add_argument("--n", type=int, help="Kostlan degree")
    group.add_argument("--ell", type=int, help="harmonic degree")
    group.add_argument("--alpha", type=float, help="band-limited window ratio or plane-wave annulus ratio")
    group.add_argument("--beta", type=float, help="monochromatic window exponent")
    group.add_argument("--waves", type=int, help="plane waves in a planar field")


def add_run_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("run")
    group.add_argument("--config", help="YAML experiment config; flags override its fields")
    group.add_argument("--t", type=float, action="append", help="level, repeatable")
    group.add_argument("--M", type=int, help="replicates")
    group.add_argument("--seed", type=int)
    group.add_argument("--res", type=float, help="cells per local scale")
    group.add_argument("--connectivity", choices=[c.value for c in Connectivity])
    group.add_argument("--out", help="output directory (default $PERCOLAB_OUTPUT_DIR or ./runs)")
    group.add_argument("--dry-run", action="store_true", help="print the resolved config hash and exit")


def ensemble_overrides(args: argparse.Namespace) -> Dict[str, object]:
    return {
        "ensemble.kind": getattr(args, "ensemble", None),
        "ensemble.n": getattr(args, "n", None),
        "ensemble.ell": getattr(args, "ell", None),
        "ensemble.alpha": getattr(args, "alpha", None),
        "ensemble.beta": getattr(args, "beta", None),
        "ensemble.waves": getattr(args, "waves", None),
    }


def run_overrides(args: argparse.Namespace) -> Dict[str, object]:
    return {
        "levels": getattr(args, "t", None),
        "replicates": getattr(args, "M", None),
        "seed": getattr(args, "seed", None),
        "resolution": getattr(args, "res", None),
        "connectivity": getattr(args, "connectivity", None),
        "output_dir": getattr(args, "out", None),
        "jobs": getattr(args, "jobs", None),
    }


def ensemble_from_args(args: argparse.Namespace) -> EnsembleConfig:
    doc = {k.split(".", 1)[1]: v for k, v in ensemble_overrides(args).items() if v is not None}
    return EnsembleConfig.model_validate(doc)


def resolve_config(
    args: argparse.Namespace,
    experiment: Optional[ExperimentKind],
    extra: Optional[Mapping[str, object]] = None,
) -> ExperimentConfig:
    overrides: Dict[str, object] = {"experiment": experiment.value if experiment else None}
    overrides.update(ensemble_overrides(args))
    overrides.update(run_overrides(args))
    overrides.update(extra or {})
    return config_service.resolve(getattr(args, "config", None), overrides)


def emit(payload: object) -> None:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def emit_summary(result: RunResult) -> None:
    lines = [f"run {result.path} ({result.manifest.row_count} rows)"]
    for rec in result.records:
        where = []
        if rec.level is not None:
            where.append(f"t={rec.level:g}")
        if rec.scale is not None:
            where.append(f"scale={rec.scale:g}")
        mark = " (censored upper bound)" if rec.censored else ""
        lines.append(f"  {rec.name} [{', '.join(where)}] = {rec.value:.6g} +/- {rec.standard_error:.3g}{mark}")
    for name, passed in sorted(result.manifest.checks.items()):
        lines.append(f"  check {name}: {'pass' if passed else 'FAIL'}")
    sys.stdout.write("\n".join(lines) + "\n")


def execute(config: ExperimentConfig, dry_run: bool = False) -> int:
    config_hash = config_service.config_hash(config)
    if dry_run:
        sys.stdout.write(config_hash + "\n")
        return EXIT_OK
    emit_summary(run_experiment_sync(config))
    return EXIT_OK
