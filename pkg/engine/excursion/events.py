"""
Percolation events on a sample: annulus crossing and circuit, arm and truncated arm.

Events live around the grid centre: the north pole for iso-latitude grids, the patch centre
for patches and the origin for planar grids. Squares are taken in the grid's tangent coordinates.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config import settings
from engine.enums import Connectivity, EventKind
from engine.exceptions import DomainError, WindowError
from engine.excursion.labeling import label_components
from engine.excursion.mask import ExcursionMask, excursion_mask
from engine.excursion.uniqueness import eu_event
from engine.fields.models import FieldSample
from engine.geometry.grid import BoolArray, LatticeGrid, SphereGrid, default_connectivity
from engine.geometry.sphere import SpherePoint

log = logging.getLogger(__name__)

MAX_EU_DELTA = 0.01


@dataclass(frozen=True)
class EventSpec:
    kind: EventKind
    level: float
    radius: float
    window: Optional[float] = None
    center: Optional[SpherePoint] = None
    delta: float = MAX_EU_DELTA

    def __post_init__(self) -> None:
        if not math.isfinite(self.radius) or self.radius <= 0.0:
            raise DomainError(f"event radius must be positive, got {self.radius!r}")
        if math.isnan(self.level):
            raise DomainError("event level must not be NaN")
        if self.kind is EventKind.eu and not 0.0 < self.delta <= MAX_EU_DELTA:
            raise DomainError(f"delta must lie in (0, {MAX_EU_DELTA}], got {self.delta!r}")
        if self.window is not None and self.window <= 2.0 * self.radius:
            raise DomainError(f"window side {self.window:g} must exceed twice the radius {self.radius:g}")

    @property
    def window_side(self) -> float:
        return self.window if self.window is not None else settings.trunc_arm_window_factor * self.radius


def square_cells(grid: LatticeGrid, half: float) -> BoolArray:
    return np.max(np.abs(grid.local_coords), axis=1) <= half


def _check_square(grid: LatticeGrid, half: float, what: str) -> BoolArray:
    if grid.spherical and half * math.sqrt(2.0) >= math.pi:
        raise WindowError(f"{what} of half side {half:g} wraps around the sphere")
    if isinstance(grid, SphereGrid) and half * math.sqrt(2.0) + grid.spacing >= grid.colat_max:
        raise WindowError(f"{what} of half side {half:g} leaves the cap grid of radius {grid.colat_max:g}")
    cells = square_cells(grid, half)
    if np.any(cells & grid.window_boundary) or bool(np.all(cells)):
        raise WindowError(f"{what} of half side {half:g} does not fit inside the grid window")
    return cells


def _contact(grid: LatticeGrid, region: BoolArray, connectivity: Connectivity) -> BoolArray:
    """Region cells adjacent to the outside of the region or on an open lattice edge."""
    return region & (grid.neighbor_any(~region, connectivity) | grid.window_boundary)


def ann_cross(mask: ExcursionMask, r: float, connectivity: Optional[Connectivity] = None) -> bool:
    """Some component of the set inside S_2r meets both S_r and the boundary of S_2r."""
    conn = connectivity or default_connectivity()
    grid = mask.grid
    outer = _check_square(grid, 2.0 * r, "annulus")
    inner = square_cells(grid, r)
    labeling = label_components(mask.restricted(outer), conn)
    if labeling.count == 0:
        return False
    from_inner = np.unique(labeling.labels[inner & (labeling.labels >= 0)])
    contact = _contact(grid, outer, conn)
    to_outer = np.unique(labeling.labels[contact & (labeling.labels >= 0)])
    return bool(np.intersect1d(from_inner, to_outer).size)


def ann_circ(mask: ExcursionMask, r: float, connectivity: Optional[Connectivity] = None) -> bool:
    """A circuit of the set in the annulus around S_r: the complement fails to cross with the dual adjacency."""
    conn = connectivity or default_connectivity()
    return not ann_cross(mask.complement(), r, conn.dual())


def _require_reach(grid: LatticeGrid, cells: BoolArray, r: float) -> None:
    if float(np.max(grid.center_distance[cells])) < r:
        raise WindowError(f"grid window does not reach distance {r:g} from its centre")


def _centre_component(mask: ExcursionMask, conn: Connectivity) -> Optional[np.ndarray]:
    grid = mask.grid
    c = grid.center_cell
    if not mask.inside[c]:
        return None
    labeling = label_components(mask, conn)
    return labeling.member_mask(int(labeling.labels[c]))


def arm(mask: ExcursionMask, r: float, connectivity: Optional[Connectivity] = None) -> bool:
    """The component of the centre cell reaches distance r."""
    conn = connectivity or default_connectivity()
    grid = mask.grid
    _require_reach(grid, np.ones(grid.size, dtype=bool), r)
    member = _centre_component(mask, conn)
    if member is None:
        return False
    return bool(np.max(grid.center_distance[member]) >= r)


def trunc_arm(
    mask: ExcursionMask,
    r: float,
    window: Optional[float] = None,
    connectivity: Optional[Connectivity] = None,
) -> bool:
    """Arm within the window square whose component stays off the window boundary."""
    conn = connectivity or default_connectivity()
    grid = mask.grid
    side = window if window is not None else settings.trunc_arm_window_factor * r
    half = side / 2.0
    if grid.spherical and half * math.sqrt(2.0) >= math.pi:
        raise WindowError(f"window of side {side:g} wraps around the sphere")
    region = square_cells(grid, half)
    _require_reach(grid, region, r)
    member = _centre_component(mask.restricted(region), conn)
    if member is None:
        return False
    if float(np.max(grid.center_distance[member])) < r:
        return False
    return not bool(np.any(member & _contact(grid, region, conn)))


def event_occurs(sample: FieldSample, ev: EventSpec, connectivity: Optional[Connectivity] = None) -> bool:
    if ev.kind is EventKind.eu:
        center = ev.center
        if center is None:
            center = getattr(sample.grid, "center_point", None)
        if center is None:
            raise DomainError("EU events need a spherical grid with a centre point")
        return eu_event(sample, center, ev.radius, ev.delta, ev.level, connectivity)
    mask = excursion_mask(sample, ev.level)
    if ev.kind is EventKind.ann_cross:
        return ann_cross(mask, ev.radius, connectivity)
    if ev.kind is EventKind.ann_circ:
        return ann_circ(mask, ev.radius, connectivity)
    if ev.kind is EventKind.arm:
        return arm(mask, ev.radius, connectivity)
    return trunc_arm(mask, ev.radius, ev.window_side, connectivity)
