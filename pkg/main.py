"""
Entry point for the percolab command-line tool.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from cli.commands import REGISTRARS
from config import CODE_VERSION, PERCOLAB_LOG_LEVEL

log = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="percolab",
        description="Monte Carlo lab for excursion-set percolation of spherical Gaussian ensembles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {CODE_VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--jobs", type=int, help="worker threads (default: available CPUs)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for register in REGISTRARS:
        register(sub)
    return parser


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else PERCOLAB_LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    if args.jobs is not None and args.jobs < 1:
        parser.error("--jobs must be at least 1")
    code: int = args.func(args)
    return code


if __name__ == "__main__":
    sys.exit(main())
