"""
Giant-component area campaigns on the sphere and local concentration of the giant.

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

from engine.enums import Connectivity, EstimandKind, ExperimentKind
from engine.exceptions import DomainError, WindowError
from engine.excursion.events import square_cells
from engine.excursion.giant import largest_diameter, level_sweep
from engine.excursion.labeling import label_components
from engine.excursion.mask import excursion_mask
from engine.experiments.models import Campaign, Estimate, ReplicateRow, Summary
from engine.experiments.stats import (
    frequency_estimate,
    group_rows,
    mean_estimate,
    metric,
    one_sided_z,
    variance_estimate,
)
from engine.fields.models import FieldSample, FieldSpec, spec_label, spec_scale
from engine.fields.sampling import sample_field
from engine.geometry.grid import LatticeGrid, SphereGrid, build_grid, default_connectivity

log = logging.getLogger(__name__)

DEFAULT_EPSILONS = (0.01, 0.02, 0.05, 0.1)


def sphere_grid(spec: FieldSpec, resolution: Optional[float] = None, colat_max: float = math.pi) -> SphereGrid:
    """Iso-latitude grid resolving the ensemble's local scale; raises below the minimum resolution."""
    return build_grid(resolution, spec_scale(spec), colat_max)


def giant_metrics(sample: FieldSample, t: float, connectivity: Optional[Connectivity] = None) -> Dict[str, float]:
    labeling = label_components(excursion_mask(sample, t), connectivity)
    total = sample.grid.total_area
    if labeling.count == 0:
        return {"area_fraction_a": 0.0, "area_fraction_d": 0.0, "coincide": 1.0, "components": 0.0}
    by_area = int(np.argmax(labeling.areas))
    by_diameter, _ = largest_diameter(labeling)
    return {
        "area_fraction_a": min(1.0, float(labeling.areas[by_area]) / total),
        "area_fraction_d": min(1.0, float(labeling.areas[by_diameter]) / total),
        "coincide": float(by_area == by_diameter),
        "components": float(labeling.count),
    }


def _deviation_estimates(
    name: str,
    values: np.ndarray,
    reference: float,
    epsilons: Sequence[float],
    level: Optional[float],
    scale: Optional[float],
    one_sided: bool,
) -> List[Estimate]:
    out = []
    for eps in epsilons:
        if one_sided:
            hits = values > reference + eps
        else:
            hits = np.abs(values - reference) >= eps
        out.append(frequency_estimate(f"{name}[eps={eps:g}]", hits.astype(float), level, scale, censor=True))
    return out


def giant_campaign(
    spec: FieldSpec,
    levels: Sequence[float],
    seed: int = 0,
    resolution: Optional[float] = None,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    reference: Optional[float] = None,
    connectivity: Optional[Connectivity] = None,
    grid: Optional[LatticeGrid] = None,
) -> Campaign:
    """Area fractions of V^a and V^d per level; levels share each replicate's sample."""
    lv = [float(t) for t in levels]
    if not lv or any(not math.isfinite(t) for t in lv):
        raise DomainError("giant campaigns need finite levels")
    if grid is None:
        grid = sphere_grid(spec, resolution)
    conn = connectivity or default_connectivity()

    def replicate(i: int) -> List[ReplicateRow]:
        sample = sample_field(spec, grid, seed, i)
        return [ReplicateRow(i, t, None, giant_metrics(sample, t, conn)) for t in lv]

    def summarize(rows: Sequence[ReplicateRow]) -> Summary:
        summary = Summary()
        groups = group_rows(rows)
        by_level: Dict[float, np.ndarray] = {}
        for (t, _), group in groups.items():
            a = metric(group, "area_fraction_a")
            d = metric(group, "area_fraction_d")
            by_level[float(t if t is not None else 0.0)] = a
            summary.estimates.extend(
                [
                    mean_estimate("giant_area_a", a, EstimandKind.area_fraction, t),
                    variance_estimate("giant_area_a_variance", a, t),
                    mean_estimate("giant_area_d", d, EstimandKind.area_fraction, t),
                    variance_estimate("giant_area_d_variance", d, t),
                    frequency_estimate("giants_coincide", metric(group, "coincide"), t),
                    mean_estimate("components", metric(group, "components"), EstimandKind.mean, t),
                ]
            )
            ref = reference if reference is not None else float(np.mean(d))
            summary.estimates.extend(_deviation_estimates("giant_deviation", d, ref, epsilons, t, None, False))
        ordered = sorted(by_level)
        for low, high in zip(ordered, ordered[1:]):
            z = one_sided_z(by_level[low], by_level[high])
            summary.estimates.append(
                Estimate(f"giant_area_z[from={low:g}]", EstimandKind.statistic, z, 0.0, len(by_level[high]), high)
            )
        summary.check(
            "monotone_per_replicate",
            all(bool(np.all(by_level[h] >= by_level[l])) for l, h in zip(ordered, ordered[1:])),
        )
        return summary

    log.debug("giant campaign on %s: %d levels, grid %dx%d", spec_label(spec), len(lv), grid.rows, grid.cols)
    return Campaign(ExperimentKind.giant, replicate, summarize)


def giant_area_experiment(
    spec: FieldSpec,
    levels: Sequence[float],
    replicates: int,
    seed: int = 0,
    resolution: Optional[float] = None,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    reference: Optional[float] = None,
) -> tuple[List[ReplicateRow], Summary]:
    return giant_campaign(spec, levels, seed, resolution, epsilons, reference).run(replicates)


def monotone_sweeps(
    spec: FieldSpec,
    levels: Sequence[float],
    replicates: int,
    seed: int = 0,
    resolution: Optional[float] = None,
) -> List[List[float]]:
    """Largest-component area fractions along ascending levels, one list per replicate."""
    grid = sphere_grid(spec, resolution)
    return [level_sweep(sample_field(spec, grid, seed, i), sorted(levels)).fractions for i in range(replicates)]


def local_giant_fraction(
    sample: FieldSample,
    half_side: float,
    t: float,
    connectivity: Optional[Connectivity] = None,
) -> float:
    """Area of the largest component of U(t) inside the centred square S_u over the square's area."""
    grid = sample.grid
    cells = square_cells(grid, half_side)
    if not np.any(cells):
        raise WindowError(f"square of half side {half_side:g} contains no cell")
    leaves_cap = isinstance(grid, SphereGrid) and half_side * math.sqrt(2.0) >= grid.colat_max
    if leaves_cap or np.any(cells & grid.window_boundary):
        raise WindowError(f"square of half side {half_side:g} does not fit inside the grid window")
    labeling = label_components(excursion_mask(sample, t).restricted(cells), connectivity)
    if labeling.count == 0:
        return 0.0
    return min(1.0, float(np.max(labeling.areas)) / float(np.sum(grid.cell_area[cells])))


def concentration_campaign(
    spec: FieldSpec,
    level: float,
    sizes: Sequence[float],
    seed: int = 0,
    resolution: Optional[float] = None,
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    reference: Optional[float] = None,
    connectivity: Optional[Connectivity] = None,
) -> Campaign:
    """Local giant fraction on S_u at the north pole with u in units of the local scale."""
    us = [float(u) for u in sizes]
    if not us or any(u <= 0.0 for u in us):
        raise DomainError("square sizes must be positive")
    scale = spec_scale(spec)
    reach = max(us) * scale * math.sqrt(2.0)
    if reach >= math.pi / 2.0:
        raise WindowError(f"largest square reaches {reach:g} from the pole")
    grid = sphere_grid(spec, resolution, colat_max=min(math.pi, reach * 1.25 + 4.0 * scale))
    conn = connectivity or default_connectivity()
    t = float(level)

    def replicate(i: int) -> List[ReplicateRow]:
        sample = sample_field(spec, grid, seed, i)
        return [ReplicateRow(i, t, u, {"local_fraction": local_giant_fraction(sample, u * scale, t, conn)}) for u in us]

    def summarize(rows: Sequence[ReplicateRow]) -> Summary:
        summary = Summary()
        groups = group_rows(rows)
        fractions = {u: metric(group, "local_fraction") for (_, u), group in groups.items()}
        ref = reference if reference is not None else float(np.mean(fractions[max(us)]))
        for u, values in fractions.items():
            summary.estimates.append(mean_estimate("local_giant_fraction", values, EstimandKind.area_fraction, t, u))
            summary.estimates.extend(_deviation_estimates("local_excess", values, ref, epsilons, t, u, True))
        return summary

    return Campaign(ExperimentKind.concentration, replicate, summarize)


def concentration_experiment(
    spec: FieldSpec,
    level: float,
    sizes: Sequence[float],
    replicates: int,
    seed: int = 0,
    resolution: Optional[float] = None,
    reference: Optional[float] = None,
) -> Summary:
    return concentration_campaign(spec, level, sizes, seed, resolution, reference=reference).run(replicates)[1]

