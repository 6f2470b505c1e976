"""
Binary PPM rendering of excursion sets: equirectangular on sphere grids, raster on lattices.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import colorsys
import logging
import math
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from config import RENDER_COLORS
from engine.enums import Connectivity, GiantCriterion, Palette
from engine.exceptions import DomainError, StoreError
from engine.excursion.giant import giant, giant_mask
from engine.excursion.labeling import ComponentLabeling, label_components
from engine.excursion.mask import excursion_mask
from engine.fields.models import FieldSample
from engine.geometry.grid import LatticeGrid, SphereGrid

log = logging.getLogger(__name__)

MIN_WIDTH = 64
NO_CELL = -1

Pixels = NDArray[np.uint8]

_GOLDEN = 0.618033988749895


def pixel_cells(grid: LatticeGrid, width: int) -> NDArray[np.int64]:
    """Cell index under every pixel, NO_CELL outside the grid."""
    if width < MIN_WIDTH:
        raise DomainError(f"render width must be at least {MIN_WIDTH}, got {width}")
    if isinstance(grid, SphereGrid):
        height = width // 2
        colat = (np.arange(height) + 0.5) * (math.pi / height)
        lon = (np.arange(width) + 0.5) * (2.0 * math.pi / width)
        rows = np.floor(colat / grid.dtheta).astype(np.int64)
        cols = np.minimum(np.floor(lon / grid.dphi).astype(np.int64), grid.cols - 1)
        inside = rows < grid.rows
        rows = np.minimum(rows, grid.rows - 1)
        cells = rows[:, None] * grid.cols + cols[None, :]
        return np.where(inside[:, None], cells, NO_CELL)
    height = max(1, int(round(width * grid.rows / grid.cols)))
    rows = np.minimum((np.arange(height) * grid.rows) // height, grid.rows - 1)
    cols = np.minimum((np.arange(width) * grid.cols) // width, grid.cols - 1)
    return rows[:, None] * grid.cols + cols[None, :]


def component_color(component: int) -> tuple[int, int, int]:
    hue = (component * _GOLDEN) % 1.0
    r, g, b = colorsys.hsv_to_rgb(hue, 0.55, 0.8)
    return int(r * 255), int(g * 255), int(b * 255)


def component_lut(labeling: ComponentLabeling) -> Pixels:
    """Row 0 is the background; row k + 1 colours component k, so index with labels + 1."""
    lut = np.empty((labeling.count + 1, 3), dtype=np.uint8)
    lut[0] = RENDER_COLORS["light"]
    for comp in labeling.components:
        lut[comp.id + 1] = component_color(comp.id)
    return lut


def cell_colors(
    sample: FieldSample,
    levels: Sequence[float],
    palette: Palette,
    outline: bool = False,
    connectivity: Optional[Connectivity] = None,
) -> Pixels:
    """(cells, 3) RGB per grid cell."""
    colors = np.empty((sample.grid.size, 3), dtype=np.uint8)
    colors[:] = RENDER_COLORS["light"]
    lower = excursion_mask(sample, levels[0])
    if palette is Palette.overlay:
        if len(levels) != 2 or not levels[0] < levels[1]:
            raise DomainError("the overlay palette needs two levels t1 < t2")
        upper = excursion_mask(sample, levels[1])
        colors[upper.inside & ~lower.inside] = RENDER_COLORS["mid"]
        colors[lower.inside] = RENDER_COLORS["dark"]
    elif palette is Palette.components:
        labeling = label_components(lower, connectivity)
        colors = component_lut(labeling)[labeling.labels + 1]
    else:
        colors[lower.inside] = RENDER_COLORS["dark"]
    if outline:
        target = excursion_mask(sample, levels[-1])
        labeling = label_components(target, connectivity)
        if labeling.count:
            members = giant_mask(labeling, giant(labeling, GiantCriterion.area))
            edge = members & sample.grid.neighbor_any(~members, connectivity)
            colors[edge] = RENDER_COLORS["outline"]
    return colors


def render_pixels(
    sample: FieldSample,
    levels: Sequence[float],
    palette: Palette = Palette.binary,
    width: int = 512,
    outline: bool = False,
    connectivity: Optional[Connectivity] = None,
) -> Pixels:
    cells = pixel_cells(sample.grid, width)
    colors = cell_colors(sample, levels, palette, outline, connectivity)
    image = np.empty(cells.shape + (3,), dtype=np.uint8)
    image[:] = RENDER_COLORS["light"]
    inside = cells != NO_CELL
    image[inside] = colors[cells[inside]]
    return image


def ppm_bytes(image: Pixels) -> bytes:
    height, width, _ = image.shape
    return f"P6\n{width} {height}\n255\n".encode("ascii") + np.ascontiguousarray(image, dtype=np.uint8).tobytes()


def write_ppm(path: Path, image: Pixels) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(ppm_bytes(image))
    except OSError as exc:
        raise StoreError(str(exc), str(path)) from exc
    log.debug("rendered %dx%d to %s", image.shape[1], image.shape[0], path)
    return path
