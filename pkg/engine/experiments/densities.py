"""
Limit-field densities from arm events on planar samples, plus duality and stability probes.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np

from config import settings
from engine.enums import Connectivity, ExperimentKind
from engine.exceptions import DomainError, WindowError
from engine.excursion.events import ann_cross, arm, ann_circ, trunc_arm
from engine.excursion.mask import excursion_mask
from engine.experiments.models import Campaign, ReplicateRow, Summary
from engine.experiments.stats import (
    frequency_estimate,
    group_rows,
    metric,
    scales_in_order,
    separated,
)
from engine.fields.models import PlanarSpec
from engine.fields.planar import sample_planar
from engine.geometry.grid import PlanarGrid, build_planar_grid, default_connectivity

log = logging.getLogger(__name__)

THETA = "theta"
PHI = "phi"


def arm_window(radius: float, window: Optional[float] = None) -> float:
    if radius <= 0.0:
        raise DomainError(f"arm radius must be positive, got {radius!r}")
    side = window if window is not None else 2.0 * radius + 2.0
    if side < 2.0 * radius + 2.0:
        raise WindowError(f"window side {side:g} is below 2R + 2 = {2.0 * radius + 2.0:g}")
    return side


def _check_levels(levels: Sequence[float]) -> List[float]:
    lv = [float(t) for t in levels]
    if not lv:
        raise DomainError("at least one level is required")
    if any(not np.isfinite(t) for t in lv):
        raise DomainError("levels must be finite")
    return lv


def density_campaign(
    spec: PlanarSpec,
    levels: Sequence[float],
    radius: Optional[float] = None,
    window: Optional[float] = None,
    seed: int = 0,
    name: str = THETA,
    correction: bool = False,
    connectivity: Optional[Connectivity] = None,
) -> Campaign:
    """Arm frequencies at the origin; one planar sample per replicate serves every level."""
    lv = _check_levels(levels)
    R = settings.default_arm_radius if radius is None else float(radius)
    side = arm_window(R, window)
    grid: PlanarGrid = build_planar_grid(side)
    conn = connectivity or default_connectivity()

    def replicate(i: int) -> List[ReplicateRow]:
        sample = sample_planar(spec, grid, seed, i)
        rows = []
        for t in lv:
            mask = excursion_mask(sample, t)
            hit = arm(mask, R, conn)
            bounded = trunc_arm(mask, R, side, conn) if hit else False
            rows.append(ReplicateRow(i, t, R, {"arm": float(hit), "trunc_arm": float(bounded)}))
        return rows

    def summarize(rows: Sequence[ReplicateRow]) -> Summary:
        summary = Summary()
        groups = group_rows(rows)
        per_level = []
        for (t, scale), group in groups.items():
            hits = metric(group, "arm")
            est = frequency_estimate(name, hits, t, scale)
            summary.estimates.append(est)
            per_level.append((t, hits))
            if correction:
                unbounded = hits - metric(group, "trunc_arm")
                summary.estimates.append(frequency_estimate(f"{name}_trunc_corrected", unbounded, t, scale))
        ordered = sorted(per_level, key=lambda item: item[0])
        summary.check(
            "arm_monotone_in_level",
            all(bool(np.all(b[1] >= a[1])) for a, b in zip(ordered, ordered[1:])),
        )
        return summary

    kind = ExperimentKind.theta if name == THETA else ExperimentKind.phi
    log.debug("%s campaign on %s: R=%g window=%g grid %dx%d", name, spec.label(), R, side, grid.rows, grid.cols)
    return Campaign(kind, replicate, summarize)


def estimate_theta(
    levels: Sequence[float],
    radius: Optional[float] = None,
    window: Optional[float] = None,
    waves: Optional[int] = None,
    replicates: int = 1000,
    seed: int = 0,
    correction: bool = False,
) -> Summary:
    """Bargmann-Fock arm frequency as the proxy for the density of the unbounded component."""
    campaign = density_campaign(PlanarSpec.bargmann_fock(waves), levels, radius, window, seed, THETA, correction)
    return campaign.run(replicates)[1]


def estimate_phi(
    levels: Sequence[float],
    alpha: float = 1.0,
    radius: Optional[float] = None,
    window: Optional[float] = None,
    waves: Optional[int] = None,
    replicates: int = 1000,
    seed: int = 0,
    correction: bool = False,
) -> Summary:
    campaign = density_campaign(PlanarSpec.plane_wave(alpha, waves), levels, radius, window, seed, PHI, correction)
    return campaign.run(replicates)[1]


def duality_campaign(
    spec: PlanarSpec,
    level: float,
    radius: float,
    seed: int = 0,
    connectivity: Optional[Connectivity] = None,
) -> Campaign:
    """AnnCirc(t) next to AnnCross(-t) under the dual adjacency on the same samples."""
    if radius <= 0.0:
        raise DomainError(f"annulus radius must be positive, got {radius!r}")
    grid = build_planar_grid(4.0 * radius + 2.0)
    conn = connectivity or default_connectivity()
    t = float(level)

    def replicate(i: int) -> List[ReplicateRow]:
        sample = sample_planar(spec, grid, seed, i)
        circ = ann_circ(excursion_mask(sample, t), radius, conn)
        cross = ann_cross(excursion_mask(sample, -t), radius, conn.dual())
        return [ReplicateRow(i, t, radius, {"ann_circ": float(circ), "ann_cross_reflected": float(cross)})]

    def summarize(rows: Sequence[ReplicateRow]) -> Summary:
        summary = Summary()
        circ = frequency_estimate("ann_circ", metric(rows, "ann_circ"), t, radius)
        reflected = frequency_estimate(
            "one_minus_ann_cross", 1.0 - metric(rows, "ann_cross_reflected"), t, radius
        )
        summary.estimates.extend([circ, reflected])
        summary.check(
            "duality_within_3se",
            not separated(circ, reflected, 3.0) and not separated(reflected, circ, 3.0),
        )
        return summary

    return Campaign(ExperimentKind.duality, replicate, summarize)


def duality_probe(
    spec: PlanarSpec,
    level: float,
    radius: float,
    replicates: int = 200,
    seed: int = 0,
) -> Summary:
    return duality_campaign(spec, level, radius, seed).run(replicates)[1]


def stability_campaign(
    spec: PlanarSpec,
    level: float,
    radius: float,
    epsilons: Sequence[float],
    seed: int = 0,
    connectivity: Optional[Connectivity] = None,
) -> Campaign:
    """Arm(t, R) minus Arm(t - eps, R + eps) for each eps on matched samples."""
    eps = [float(e) for e in epsilons]
    if not eps or any(e <= 0.0 for e in eps):
        raise DomainError("stability probes need positive epsilons")
    t = float(level)
    grid = build_planar_grid(arm_window(radius + max(eps)))
    conn = connectivity or default_connectivity()

    def replicate(i: int) -> List[ReplicateRow]:
        sample = sample_planar(spec, grid, seed, i)
        base = arm(excursion_mask(sample, t), radius, conn)
        rows = []
        for e in eps:
            perturbed = arm(excursion_mask(sample, t - e), radius + e, conn) if base else False
            rows.append(ReplicateRow(i, t, e, {"arm": float(base), "unstable": float(base and not perturbed)}))
        return rows

    def summarize(rows: Sequence[ReplicateRow]) -> Summary:
        summary = Summary()
        groups = group_rows(rows)
        hits = {}
        for (lvl, scale), group in groups.items():
            e = float(scale if scale is not None else 0.0)
            hits[e] = metric(group, "unstable")
            summary.estimates.append(frequency_estimate("arm_instability", hits[e], lvl, e))
        ladder = sorted(scales_in_order(rows))
        summary.check(
            "nested_as_eps_decreases",
            all(bool(np.all(hits[a] <= hits[b])) for a, b in zip(ladder, ladder[1:])),
        )
        return summary

    return Campaign(ExperimentKind.stability, replicate, summarize)


def stability_probe(
    spec: PlanarSpec,
    level: float,
    radius: float,
    epsilons: Sequence[float],
    replicates: int = 200,
    seed: int = 0,
) -> Summary:
    return stability_campaign(spec, level, radius, epsilons, seed).run(replicates)[1]


def level_order_check(summary: Summary, name: str, sigmas: float = 3.0) -> bool:
    """Estimates of ``name`` increase with the level, each step beyond ``sigmas`` pooled SE."""
    ests = sorted(summary.named(name), key=lambda e: e.level if e.level is not None else 0.0)
    return all(separated(a, b, sigmas) for a, b in zip(ests, ests[1:]))

