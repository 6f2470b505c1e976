"""
The render sub-command: PPM images of a stored sample's excursion sets.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from cli.requests import RenderConfig
from engine.enums import Palette
from engine.fields import read_sample
from engine.render import render_pixels, write_ppm

from .exception import EXIT_OK, handle_exceptions

log = logging.getLogger(__name__)


@handle_exceptions
def cmd_render(args: argparse.Namespace) -> int:
    render = RenderConfig.model_validate(
        {"levels": args.t or [], "width": args.width, "palette": args.palette, "outline": args.outline}
    )
    stem = Path(args.sample)
    sample = read_sample(stem)
    image = render_pixels(sample, render.levels, render.palette, render.width, render.outline)
    target = Path(args.image) if args.image else stem.parent / f"{stem.name}.ppm"
    write_ppm(target, image)
    log.info("rendered %s", target)
    return EXIT_OK


def register(sub: argparse._SubParsersAction) -> None:  # type: ignore[type-arg]
    p = sub.add_parser("render", help="render a stored sample as a binary PPM")
    p.add_argument("--sample", required=True, help="sample path without extension")
    p.add_argument("--t", type=float, action="append", help="level; give two for the overlay palette")
    p.add_argument("--palette", choices=[v.value for v in Palette], default=Palette.binary.value)
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--outline", action="store_true", help="outline the largest component")
    p.add_argument("--image", help="output .ppm path (default next to the sample)")
    p.set_defaults(func=cmd_render)
