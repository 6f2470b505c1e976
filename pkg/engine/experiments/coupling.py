"""
Coupling-error ladders: Var(f - f^(r)) and sup |f - f^(r)| across a ladder of ranges.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from engine.enums import EnsembleKind, EstimandKind, ExperimentKind
from engine.exceptions import DomainError
from engine.experiments.models import Campaign, Estimate, ReplicateRow, Summary
from engine.experiments.stats import (
    frequency_estimate,
    group_rows,
    log_slope,
    mean_estimate,
    metric,
    paired_decrease,
)
from engine.fields.harmonics import coefficient_count
from engine.fields.models import spec_label, spec_scale
from engine.fields.spherical import draw_coefficients
from engine.finite_range.diagnostics import threshold_ladder
from engine.finite_range.kostlan import kostlan_coupled
from engine.finite_range.models import CoupledPair
from engine.finite_range.zonal import truncate_zonal, zonal_truncated_pair
from engine.geometry.grid import LatticeGrid, PatchGrid
from engine.geometry.sphere import NORTH_POLE, SpherePoint
from engine.spectral import KernelSpec, ZonalCoefficients, kernel_coefficients

log = logging.getLogger(__name__)

ORTHANT_CENTER = SpherePoint((1.0 / math.sqrt(3.0),) * 3)
SQUARED = "squared_difference"
SUP = "sup_difference"
ANALYTIC = "analytic_variance"

CouplingSpec = Union[KernelSpec, ZonalCoefficients]


def orthant_patch(half_extent: float = 0.15, cells: int = 7) -> PatchGrid:
    """Small patch around the orthant diagonal where the Kostlan localization points live."""
    return PatchGrid.square(ORTHANT_CENTER, half_extent, cells)


def polar_patch(scale: float, cells: int = 5) -> PatchGrid:
    return PatchGrid.square(NORTH_POLE, 2.0 * scale, cells)


def _pair_builder(
    spec: CouplingSpec,
    radii: List[float],
    grid: LatticeGrid,
    seed: int,
) -> Callable[[int], List[CoupledPair]]:
    if isinstance(spec, KernelSpec) and spec.kind is EnsembleKind.kostlan:
        n = spec.degree
        return lambda i: [kostlan_coupled(n, r, grid, seed, i) for r in radii]
    coeffs = kernel_coefficients(spec) if isinstance(spec, KernelSpec) else spec
    truncations = {r: truncate_zonal(coeffs, r) for r in radii}
    count = coefficient_count(max([coeffs.lmax] + [tr.degree for tr in truncations.values()]))
    log.debug("zonal truncations: %s", {f"{r:.4g}": tr.degree for r, tr in truncations.items()})

    def pairs(i: int) -> List[CoupledPair]:
        a = draw_coefficients(count, seed, i)
        return [zonal_truncated_pair(coeffs, r, grid, seed, i, truncations[r], a) for r in radii]

    return pairs


def coupling_campaign(
    spec: CouplingSpec,
    radii: Sequence[float],
    seed: int = 0,
    grid: Optional[LatticeGrid] = None,
) -> Campaign:
    """Matched-seed coupling errors along ``radii``; the replicate index fixes the shared coefficients."""
    rs = [float(r) for r in radii]
    if not rs or any(r <= 0.0 for r in rs):
        raise DomainError("coupling ladders need positive ranges")
    kostlan = isinstance(spec, KernelSpec) and spec.kind is EnsembleKind.kostlan
    scale = spec_scale(spec)
    degree = spec.degree if isinstance(spec, KernelSpec) else 0
    if grid is None:
        grid = orthant_patch() if kostlan else polar_patch(scale)
    build = _pair_builder(spec, rs, grid, seed)

    def replicate(i: int) -> List[ReplicateRow]:
        rows = []
        for pair in build(i):
            diff = pair.difference
            analytic = pair.analytic_variance
            rows.append(
                ReplicateRow(
                    i,
                    None,
                    pair.range,
                    {
                        SQUARED: float(np.mean(diff**2)),
                        SUP: float(np.max(np.abs(diff))),
                        ANALYTIC: float(np.mean(analytic)) if analytic is not None else math.nan,
                    },
                )
            )
        return rows

    def summarize(rows: Sequence[ReplicateRow]) -> Summary:
        summary = Summary()
        groups = group_rows(rows)
        squared: Dict[float, np.ndarray] = {}
        sups: Dict[float, np.ndarray] = {}
        for (_, r), group in groups.items():
            rr = float(r if r is not None else 0.0)
            squared[rr] = metric(group, SQUARED)
            sups[rr] = metric(group, SUP)
            var = mean_estimate("difference_variance", squared[rr], EstimandKind.variance, None, rr)
            summary.estimates.append(var)
            analytic = float(np.mean(metric(group, ANALYTIC)))
            summary.estimates.append(Estimate("analytic_variance", EstimandKind.variance, analytic, 0.0, len(group), None, rr))
            summary.estimates.append(mean_estimate("sup_difference", sups[rr], EstimandKind.mean, None, rr))
            if not kostlan:
                ratio = rr / scale
                summary.estimates.append(
                    Estimate(
                        "scaled_variance",
                        EstimandKind.ratio,
                        var.value * ratio,
                        var.standard_error * ratio,
                        var.replicates,
                        None,
                        rr,
                    )
                )
        ladder = sorted(squared)
        thresholds = threshold_ladder(float(np.mean(sups[ladder[0]])))
        for r in ladder:
            for u in thresholds:
                summary.estimates.append(
                    frequency_estimate(f"sup_exceedance[u={u:.4g}]", (sups[r] > u).astype(float), None, r)
                )
        summary.check(
            "strictly_decreasing",
            all(paired_decrease(squared[a], squared[b], 2.0) for a, b in zip(ladder, ladder[1:])),
        )
        means = [float(np.mean(squared[r])) for r in ladder]
        if kostlan:
            _kostlan_shape(summary, degree, ladder, means, len(squared[ladder[0]]))
        else:
            scaled = [m * r / scale for m, r in zip(means, ladder) if m > 0.0]
            if scaled:
                summary.check("scaled_variance_flat", max(scaled) <= 4.0 * min(scaled))
        return summary

    log.debug("coupling ladder for %s over %d ranges on %d cells", spec_label(spec), len(rs), grid.size)
    return Campaign(ExperimentKind.coupling, replicate, summarize)


def _kostlan_shape(summary: Summary, n: int, ladder: List[float], means: List[float], replicates: int) -> None:
    """log Var against r^2 n, and secant slopes of log Var in r that steepen along the ladder."""
    fit = log_slope([r * r * n for r in ladder], means)
    if fit is not None:
        summary.estimates.append(
            Estimate("log_variance_slope_r2n", EstimandKind.slope, fit[0], fit[1], max(replicates, 1))
        )
    pts = [(r, math.log(m)) for r, m in zip(ladder, means) if m > 0.0]
    if len(pts) >= 3:
        secants = [(b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(pts, pts[1:])]
        summary.check("decay_steepens_in_r", all(s2 < s1 for s1, s2 in zip(secants, secants[1:])))


def coupling_ladder(
    spec: CouplingSpec,
    radii: Sequence[float],
    replicates: int,
    seed: int = 0,
    grid: Optional[LatticeGrid] = None,
) -> Summary:
    return coupling_campaign(spec, radii, seed, grid).run(replicates)[1]
