"""
Checks of the kernel decay bounds: explicit for Kostlan, empirical constants otherwise.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np
from numpy.typing import ArrayLike

from config import settings
from engine.enums import EnsembleKind
from engine.exceptions import BoundViolationError, DomainError
from engine.spectral.kernels import KernelSpec, kernel_values
from engine.spectral.polynomials import FloatArray

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelBoundReport:
    kind: EnsembleKind
    degree: int
    rate: str
    points: int
    explicit: bool
    passed: bool
    empirical_constant: float
    worst_theta: float


def _bound_grid(thetas: ArrayLike) -> FloatArray:
    th = np.asarray(thetas, dtype=float).ravel()
    if th.size == 0:
        raise DomainError("angle grid is empty")
    if not np.all(np.isfinite(th)) or float(np.min(th)) <= 0.0:
        raise DomainError("angle grid must lie in (0, pi/2]")
    if float(np.max(th)) > math.pi / 2.0 + settings.legendre_domain_tol:
        raise DomainError("angle grid must lie in (0, pi/2]")
    return np.minimum(th, math.pi / 2.0)


def decay_rate(spec: KernelSpec, thetas: FloatArray) -> tuple[FloatArray, str]:
    ell = max(spec.degree, 1)
    if spec.kind is EnsembleKind.kostlan:
        return np.exp(-(thetas**2) * spec.degree / 4.0), "exp(-theta^2 n/4)"
    if spec.kind is EnsembleKind.rsh or spec.window_width == 1:
        return thetas**-0.5 * ell**-0.5, "theta^-1/2 l^-1/2"
    if spec.kind is EnsembleKind.bandlimited:
        return thetas**-1.5 * float(ell) ** -1.5, "theta^-3/2 l^-3/2"
    return thetas**-1.5 * float(ell) ** (-0.5 - spec.beta), "theta^-3/2 l^-1/2-beta"


def kernel_bound_report(spec: KernelSpec, thetas: ArrayLike) -> KernelBoundReport:
    th = _bound_grid(thetas)
    values = np.abs(kernel_values(spec, th))
    rate, rate_label = decay_rate(spec, th)
    ratio = values / rate
    worst = int(np.argmax(ratio))
    if spec.kind is EnsembleKind.kostlan:
        violated = np.flatnonzero(values > rate)
        if violated.size:
            i = int(violated[0])
            raise BoundViolationError(
                f"{spec.label()}: |kernel|={values[i]!r} exceeds exp(-theta^2 n/4)={rate[i]!r} at theta={th[i]!r}"
            )
    report = KernelBoundReport(
        kind=spec.kind,
        degree=spec.degree,
        rate=rate_label,
        points=int(th.size),
        explicit=spec.kind is EnsembleKind.kostlan,
        passed=True,
        empirical_constant=float(ratio[worst]),
        worst_theta=float(th[worst]),
    )
    log.debug("%s bound constant %.6g at theta=%.6g", spec.label(), report.empirical_constant, report.worst_theta)
    return report


def empirical_constant_ladder(
    kind: EnsembleKind,
    degrees: Iterable[int],
    thetas: ArrayLike,
    alpha: float = 0.0,
    beta: float = 0.5,
) -> List[KernelBoundReport]:
    return [kernel_bound_report(KernelSpec(kind, int(d), alpha=alpha, beta=beta), thetas) for d in degrees]


def default_bound_grid(points: int = 50, lower: Optional[float] = None) -> FloatArray:
    start = lower if lower is not None else math.pi / (2.0 * points)
    return np.linspace(start, math.pi / 2.0, points)
