"""
Local existence-uniqueness of the giant over a fixed family of caps and squares.

Within each region U the giant is the component of U(t) ∩ U of largest diameter; the
event holds when every component of U minus that giant is narrower than delta r.
The family is finite, so results are labelled "EU (discretized family)".

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config import settings
from engine.enums import Connectivity
from engine.exceptions import DomainError, ResolutionError, WindowError
from engine.excursion.giant import default_mode, component_diameter, diameter_bounds, largest_diameter
from engine.excursion.labeling import label_components
from engine.excursion.mask import ExcursionMask, excursion_mask
from engine.fields.models import FieldSample
from engine.geometry.grid import LatticeGrid, PatchGrid, SphereGrid, build_patch_grid, default_connectivity
from engine.geometry.sphere import (
    Region,
    SpherePoint,
    SphereSquare,
    SphericalCap,
    as_array,
    exp_map_array,
    region_contains,
    sph_dist,
    sph_dist_array,
    tangent_frame,
)

log = logging.getLogger(__name__)

EU_LABEL = "EU (discretized family)"
CAP_RADII = (1.0, 1.5, 2.0)
SQUARE_HALF_SIDES = (1.0, 2.0)
SQUARE_ROTATIONS = (0.0, math.pi / 8.0, math.pi / 4.0, 3.0 * math.pi / 8.0)
_RING_SIZE = 6


def _ring_centres(x: SpherePoint, radius: float, offset: float) -> List[SpherePoint]:
    phi = offset + 2.0 * math.pi * np.arange(_RING_SIZE) / _RING_SIZE
    w = radius * np.column_stack([np.cos(phi), np.sin(phi)])
    return [SpherePoint(tuple(p)) for p in exp_map_array(x, w, tangent_frame(x))]  # type: ignore[arg-type]


def eu_family(x: SpherePoint, r: float) -> List[Tuple[str, Region]]:
    """Caps about x and two rings of six centres, radii {r, 1.5r, 2r}, kept inside D_3r(x); plus rotated squares."""
    if not 0.0 < r <= math.pi / 6.0:
        raise DomainError(f"EU radius must lie in (0, pi/6], got {r!r}")
    centres = [x] + _ring_centres(x, r / 2.0, 0.0) + _ring_centres(x, r, math.pi / 6.0)
    family: List[Tuple[str, Region]] = []
    for k, c in enumerate(centres):
        offset = sph_dist(x, c)
        for f in CAP_RADII:
            if offset + f * r <= 3.0 * r + 1e-12:
                family.append((f"cap[{k}]x{f:g}", SphericalCap(c, f * r)))
    for angle in SQUARE_ROTATIONS:
        for f in SQUARE_HALF_SIDES:
            family.append((f"square[{angle:.4f}]x{f:g}", SphereSquare.at(x, f * r, angle)))
    return family


def eu_grid(x: SpherePoint, r: float, delta: float) -> PatchGrid:
    """Patch around x covering D_3r(x) with ``eu_min_cells_across`` cells per delta r."""
    spacing = delta * r / settings.eu_min_cells_across
    return build_patch_grid(x, 3.0 * r + 2.0 * spacing, spacing)


def _check_grid(grid: LatticeGrid, x: SpherePoint, r: float, delta: float) -> None:
    if not grid.spherical:
        raise DomainError("EU events need a spherical grid")
    need = delta * r / settings.eu_min_cells_across
    if grid.spacing > need * (1.0 + 1e-9):
        raise ResolutionError(
            f"grid spacing {grid.spacing:.3g} gives fewer than {settings.eu_min_cells_across:g} cells across delta r"
        )
    if isinstance(grid, SphereGrid) and sph_dist(x, grid.center_point) + 3.0 * r > grid.colat_max:
        raise WindowError("D_3r(x) leaves the cap grid")
    near = sph_dist_array(grid.positions, as_array(x)) <= 3.0 * r
    if np.any(near & grid.window_boundary):
        raise WindowError("D_3r(x) is cut by the grid window")


@dataclass(frozen=True)
class EUReport:
    occurs: bool
    regions: int
    failures: List[str] = field(default_factory=list)
    label: str = EU_LABEL


def _region_holds(mask: ExcursionMask, cells: np.ndarray, small: float, conn: Connectivity) -> bool:
    labeling = label_components(mask.restricted(cells), conn)
    if labeling.count == 0:
        return False
    gid, _ = largest_diameter(labeling)
    rest = cells & ~labeling.member_mask(gid)
    holes = label_components(ExcursionMask(mask.grid, mask.level, rest), conn)
    if holes.count == 0:
        return True
    low, high = diameter_bounds(holes)
    if np.any(low >= small):
        return False
    for i in np.flatnonzero(high >= small):
        d = component_diameter(mask.grid, holes.cells_of(int(i)), default_mode(int(holes.sizes[i])), conn)
        if d >= small:
            return False
    return True


def eu_report(
    sample: FieldSample,
    x: SpherePoint,
    r: float,
    delta: float,
    t: float,
    connectivity: Optional[Connectivity] = None,
    stop_early: bool = True,
) -> EUReport:
    conn = connectivity or default_connectivity()
    if not 0.0 < delta <= 0.01:
        raise DomainError(f"delta must lie in (0, 0.01], got {delta!r}")
    _check_grid(sample.grid, x, r, delta)
    mask = excursion_mask(sample, t)
    family = eu_family(x, r)
    pos = sample.grid.positions
    failures: List[str] = []
    for name, region in family:
        cells = region_contains(region, pos)
        if not _region_holds(mask, cells, delta * r, conn):
            failures.append(name)
            if stop_early:
                break
    log.debug("EU t=%.3g r=%.3g: %d/%d regions failed", t, r, len(failures), len(family))
    return EUReport(not failures, len(family), failures)


def eu_event(
    sample: FieldSample,
    x: SpherePoint,
    r: float,
    delta: float,
    t: float,
    connectivity: Optional[Connectivity] = None,
) -> bool:
    return eu_report(sample, x, r, delta, t, connectivity).occurs
