"""
Giant components by area and by diameter, component diameters, and level sweeps.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from config import settings
from engine.enums import Connectivity, DiameterMode, GiantCriterion
from engine.exceptions import DomainError, EmptyMaskError, SizeError
from engine.excursion.labeling import ComponentLabeling, IntArray, label_components
from engine.excursion.mask import excursion_mask
from engine.fields.models import FieldSample
from engine.geometry.grid import BoolArray, LatticeGrid
from engine.geometry.sphere import FloatArray

log = logging.getLogger(__name__)

_BLOCK = 2048


@dataclass(frozen=True)
class Giant:
    component: int
    area: float
    diameter: float
    criterion: GiantCriterion


def _max_pairwise(grid: LatticeGrid, pts: FloatArray) -> float:
    if pts.shape[0] < 2:
        return 0.0
    if grid.spherical:
        low = 1.0
        for start in range(0, pts.shape[0], _BLOCK):
            low = min(low, float(np.min(pts[start : start + _BLOCK] @ pts.T)))
        return float(math.acos(max(-1.0, min(1.0, low))))
    best = 0.0
    for start in range(0, pts.shape[0], _BLOCK):
        block = pts[start : start + _BLOCK]
        d2 = np.sum(block**2, axis=1)[:, None] + np.sum(pts**2, axis=1)[None, :] - 2.0 * block @ pts.T
        best = max(best, float(np.max(d2)))
    return math.sqrt(max(best, 0.0))


def _thin(cells: IntArray, cap: int) -> IntArray:
    if cells.size <= cap:
        return cells
    step = int(math.ceil(cells.size / cap))
    return cells[::step]


def component_diameter(
    grid: LatticeGrid,
    cells: ArrayLike,
    mode: DiameterMode = DiameterMode.exact,
    connectivity: Optional[Connectivity] = None,
) -> float:
    """Largest distance between two cell centres of the component.

    The subsampled mode pairs up the component's boundary cells together with an even
    thinning of all its cells, so it never exceeds the exact value.
    """
    idx = np.unique(np.asarray(cells, dtype=np.int64).ravel())
    if idx.size == 0:
        raise DomainError("component must contain at least one cell")
    if mode is DiameterMode.exact:
        if idx.size > settings.diameter_exact_cap:
            raise SizeError(f"exact diameter of {idx.size} cells exceeds the cap of {settings.diameter_exact_cap}")
        return _max_pairwise(grid, grid.positions[idx])
    member = np.zeros(grid.size, dtype=bool)
    member[idx] = True
    edge = idx[grid.neighbor_any(~member, connectivity)[idx]]
    cap = settings.diameter_boundary_cap
    chosen = np.union1d(_thin(edge, cap), _thin(idx, cap))
    return _max_pairwise(grid, grid.positions[chosen])


def default_mode(cells: int) -> DiameterMode:
    return DiameterMode.exact if cells <= settings.diameter_exact_cap else DiameterMode.subsampled


def diameter_bounds(labeling: ComponentLabeling) -> tuple[FloatArray, FloatArray]:
    """Per component, (max distance from the representative, twice that)."""
    grid = labeling.mask.grid
    inside = np.flatnonzero(labeling.labels >= 0)
    ids = labeling.labels[inside]
    pos = grid.positions
    anchor = pos[labeling.representatives[ids]]
    if grid.spherical:
        dist = np.arccos(np.clip(np.sum(pos[inside] * anchor, axis=1), -1.0, 1.0))
    else:
        dist = np.linalg.norm(pos[inside] - anchor, axis=1)
    low = np.zeros(labeling.count)
    np.maximum.at(low, ids, dist)
    high = 2.0 * low
    if grid.spherical:
        high = np.minimum(high, math.pi)
    return low, high


def largest_diameter(labeling: ComponentLabeling, mode: Optional[DiameterMode] = None) -> tuple[int, float]:
    """Component of largest diameter, ties to the smallest representative."""
    low, high = diameter_bounds(labeling)
    sizes = labeling.sizes
    best_id, best = -1, -1.0
    for i in sorted(range(labeling.count), key=lambda k: (-high[k], k)):
        if high[i] < best:
            break
        if low[i] == high[i]:
            d = float(low[i])
        else:
            d = component_diameter(labeling.mask.grid, labeling.cells_of(i), mode or default_mode(int(sizes[i])))
        if d > best or (d == best and i < best_id):
            best_id, best = i, d
    return best_id, best


def giant(
    labeling: ComponentLabeling,
    by: GiantCriterion = GiantCriterion.area,
    mode: Optional[DiameterMode] = None,
) -> Giant:
    if labeling.count == 0:
        raise EmptyMaskError("excursion set has no components")
    if by is GiantCriterion.diameter:
        cid, diameter = largest_diameter(labeling, mode)
        return Giant(cid, labeling.components[cid].area, diameter, by)
    cid = int(np.argmax(labeling.areas))
    comp = labeling.components[cid]
    diameter = component_diameter(labeling.mask.grid, labeling.cells_of(cid), mode or default_mode(comp.cells))
    return Giant(cid, comp.area, diameter, by)


def giant_mask(labeling: ComponentLabeling, g: Giant) -> BoolArray:
    return labeling.member_mask(g.component)


def giant_area_fraction(labeling: ComponentLabeling) -> float:
    """Area(V^a) over the grid area; zero for an empty set."""
    if labeling.count == 0:
        return 0.0
    return float(np.max(labeling.areas)) / labeling.mask.grid.total_area


@dataclass(frozen=True)
class LevelSweep:
    levels: List[float]
    fractions: List[float]
    components: List[int]


def level_sweep(
    sample: FieldSample,
    levels: Sequence[float],
    connectivity: Optional[Connectivity] = None,
) -> LevelSweep:
    """Largest-component area fractions along ascending levels of one sample."""
    lv = [float(t) for t in levels]
    if any(b < a for a, b in zip(lv, lv[1:])):
        raise DomainError("levels must be ascending")
    fractions: List[float] = []
    counts: List[int] = []
    for t in lv:
        labeling = label_components(excursion_mask(sample, t), connectivity)
        fractions.append(giant_area_fraction(labeling))
        counts.append(labeling.count)
    return LevelSweep(lv, fractions, counts)
