"""
The kernel sub-command: kernel values and decay-bound checks.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import argparse
import logging
import math

import numpy as np

from cli.responses import KernelBoundRow, KernelCheckResponse
from engine.exceptions import BoundViolationError, DomainError
from engine.spectral import KernelSpec, default_bound_grid, kernel_bound_report, kernel_values

from .common import add_ensemble_args, emit, ensemble_from_args
from .exception import EXIT_OK, EXIT_RUNTIME, handle_exceptions

log = logging.getLogger(__name__)


@handle_exceptions
def cmd_kernel(args: argparse.Namespace) -> int:
    spec = ensemble_from_args(args).to_spec()
    if not isinstance(spec, KernelSpec):
        raise DomainError("kernel checks apply to spherical ensembles")
    if not args.check_bounds:
        thetas = np.asarray(args.theta or np.linspace(0.0, math.pi, 9), dtype=float)
        values = kernel_values(spec, thetas)
        emit({"ensemble": spec.label(), "theta": thetas.tolist(), "kernel": values.tolist()})
        return EXIT_OK
    grid = default_bound_grid(args.points)
    try:
        report = kernel_bound_report(spec, grid)
    except BoundViolationError as exc:
        emit(KernelCheckResponse(passed=False, rows=[], error=str(exc)))
        return EXIT_RUNTIME
    row = KernelBoundRow(
        kind=report.kind,
        degree=report.degree,
        rate=report.rate,
        points=report.points,
        explicit=report.explicit,
        passed=report.passed,
        empirical_constant=report.empirical_constant,
        worst_theta=report.worst_theta,
    )
    emit(KernelCheckResponse(passed=report.passed, rows=[row]))
    return EXIT_OK if report.passed else EXIT_RUNTIME


def register(sub: argparse._SubParsersAction) -> None:  # type: ignore[type-arg]
    p = sub.add_parser("kernel", help="evaluate a kernel or check its decay bound")
    add_ensemble_args(p, required=True)
    p.add_argument("--check-bounds", action="store_true", help="check the kernel decay bound on (0, pi/2]")
    p.add_argument("--points", type=int, default=100, help="angles in the bound grid")
    p.add_argument("--theta", type=float, action="append", help="angle to evaluate, repeatable")
    p.set_defaults(func=cmd_kernel)
