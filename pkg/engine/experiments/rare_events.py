"""
Frequencies of the rare configurations behind the lower bounds on giant deviations.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from config import FOUR_PI
from engine.enums import Connectivity, ExperimentKind
from engine.exceptions import DomainError
from engine.excursion.giant import largest_diameter
from engine.excursion.labeling import label_components
from engine.excursion.mask import excursion_mask
from engine.experiments.giant_area import sphere_grid
from engine.experiments.models import Campaign, ReplicateRow, Summary
from engine.experiments.stats import frequency_estimate, group_rows, metric
from engine.fields.models import FieldSample, FieldSpec
from engine.fields.sampling import sample_field
from engine.geometry.grid import SphereGrid, default_connectivity

log = logging.getLogger(__name__)

RARE_EVENTS = ("all_sphere", "blocked_loop", "small_giant")


def equator_row(grid: SphereGrid) -> int:
    if grid.colat_max < math.pi:
        raise DomainError("the equator loop needs a whole-sphere grid")
    return int(np.argmin(np.abs(grid.row_colatitudes - math.pi / 2.0)))


def rare_metrics(
    sample: FieldSample,
    t: float,
    epsilon: float,
    connectivity: Optional[Connectivity] = None,
) -> Dict[str, float]:
    grid = sample.grid
    if not isinstance(grid, SphereGrid):
        raise DomainError("rare events are defined on the iso-latitude sphere grid")
    values = sample.values.reshape(grid.shape)
    all_sphere = float(np.max(values)) <= t
    blocked = float(np.min(values[equator_row(grid)])) > t
    labeling = label_components(excursion_mask(sample, t), connectivity)
    if labeling.count == 0:
        giant_area = 0.0
    else:
        gid, _ = largest_diameter(labeling)
        giant_area = float(labeling.areas[gid])
    return {
        "all_sphere": float(all_sphere),
        "blocked_loop": float(blocked),
        "small_giant": float(giant_area < epsilon * FOUR_PI),
    }


def rare_event_campaign(
    spec: FieldSpec,
    levels: Sequence[float],
    seed: int = 0,
    epsilon: float = 0.1,
    resolution: Optional[float] = None,
    connectivity: Optional[Connectivity] = None,
) -> Campaign:
    """All-sphere, blocked equator loop and small diametric giant events, censored below the hit floor."""
    lv = [float(t) for t in levels]
    if not lv:
        raise DomainError("at least one level is required")
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    grid = sphere_grid(spec, resolution)
    conn = connectivity or default_connectivity()

    def replicate(i: int) -> List[ReplicateRow]:
        sample = sample_field(spec, grid, seed, i)
        return [ReplicateRow(i, t, epsilon, rare_metrics(sample, t, epsilon, conn)) for t in lv]

    def summarize(rows: Sequence[ReplicateRow]) -> Summary:
        summary = Summary()
        for (t, eps), group in group_rows(rows).items():
            for name in RARE_EVENTS:
                summary.estimates.append(frequency_estimate(name, metric(group, name), t, eps, censor=True))
        return summary

    return Campaign(ExperimentKind.rare, replicate, summarize)


def rare_event_experiment(
    spec: FieldSpec,
    levels: Sequence[float],
    replicates: int,
    seed: int = 0,
    epsilon: float = 0.1,
    resolution: Optional[float] = None,
) -> Summary:
    return rare_event_campaign(spec, levels, seed, epsilon, resolution).run(replicates)[1]
