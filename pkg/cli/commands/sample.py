"""
The sample sub-command: draw one field realization and write it with its sidecar.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import argparse
import re
from pathlib import Path

from cli.responses import SampleResponse
from engine.experiments import sphere_grid
from engine.fields import PlanarSpec, sample_field, spec_label, write_sample
from engine.geometry import build_planar_grid
from store.keys import sample_stem

from .common import add_ensemble_args, emit, ensemble_from_args
from .exception import EXIT_OK, handle_exceptions


@handle_exceptions
def cmd_sample(args: argparse.Namespace) -> int:
    spec = ensemble_from_args(args).to_spec()
    if isinstance(spec, PlanarSpec):
        grid = build_planar_grid(args.side)
    else:
        grid = sphere_grid(spec, args.res)
    sample = sample_field(spec, grid, args.seed, args.replicate)
    label = re.sub(r"[^A-Za-z0-9_.]+", "-", spec_label(spec)).strip("-")
    stem = Path(args.stem) if args.stem else sample_stem(label, args.seed, args.replicate, args.out)
    data_path, meta_path = write_sample(sample, stem)
    emit(
        SampleResponse(
            label=spec_label(spec),
            seed=args.seed,
            replicate=args.replicate,
            cells=grid.size,
            data_path=str(data_path),
            sidecar_path=str(meta_path),
        )
    )
    return EXIT_OK


def register(sub: argparse._SubParsersAction) -> None:  # type: ignore[type-arg]
    p = sub.add_parser("sample", help="draw one field sample and write it to disk")
    add_ensemble_args(p, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicate", type=int, default=0)
    p.add_argument("--res", type=float, help="cells per local scale")
    p.add_argument("--side", type=float, default=20.0, help="window side for planar fields")
    p.add_argument("--stem", help="output path without extension")
    p.add_argument("--out", help="output directory (default $PERCOLAB_OUTPUT_DIR or ./runs)")
    p.set_defaults(func=cmd_sample)
