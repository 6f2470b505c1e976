"""
Lattice grids carrying per-cell positions, areas and adjacency: global and polar-cap
iso-latitude grids, exponential-map patches and planar squares.

All grids are row-major ``rows x cols`` lattices. Spherical grids may wrap in the
column direction and may merge a whole boundary row through a pole, which is the
only non-lattice adjacency the labeling code has to handle.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from config import settings
from engine.enums import Connectivity
from engine.exceptions import DomainError, ResolutionError
from engine.geometry.sphere import (
    FloatArray,
    NORTH_POLE,
    SpherePoint,
    as_array,
    exp_map_array,
    points_to_latlon,
    rotated_frame,
    sph_dist_array,
)
from custom_types.json import JSONDict

log = logging.getLogger(__name__)

BoolArray = NDArray[np.bool_]

_MOORE: Tuple[Tuple[int, int], ...] = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
_VON_NEUMANN: Tuple[Tuple[int, int], ...] = ((-1, 0), (0, -1), (0, 1), (1, 0))


def neighbor_offsets(connectivity: Connectivity) -> Tuple[Tuple[int, int], ...]:
    return _MOORE if connectivity is Connectivity.moore else _VON_NEUMANN


def default_connectivity() -> Connectivity:
    return Connectivity(settings.grid_connectivity)


@dataclass(frozen=True, eq=False)
class LatticeGrid:
    rows: int
    cols: int

    wrap_cols = False
    merge_top = False
    merge_bottom = False
    spherical = True
    kind = "lattice"

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise DomainError(f"grid shape must be positive, got {self.rows}x{self.cols}")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def size(self) -> int:
        return self.rows * self.cols

    @property
    def spacing(self) -> float:
        raise NotImplementedError

    @cached_property
    def positions(self) -> FloatArray:
        raise NotImplementedError

    @cached_property
    def cell_area(self) -> FloatArray:
        raise NotImplementedError

    @cached_property
    def local_coords(self) -> FloatArray:
        """Tangent-plane coordinates about the grid centre."""
        raise NotImplementedError

    @cached_property
    def center_distance(self) -> FloatArray:
        return np.linalg.norm(self.local_coords, axis=1)

    @property
    def total_area(self) -> float:
        return float(np.sum(self.cell_area))

    @cached_property
    def center_cell(self) -> int:
        return int(np.argmin(self.center_distance))

    def params(self) -> JSONDict:
        return {}

    def descriptor(self) -> JSONDict:
        return {"kind": self.kind, "rows": self.rows, "cols": self.cols, **self.params()}

    @cached_property
    def identity(self) -> str:
        text = json.dumps(self.descriptor(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    def chord_to_distance(self, chord: FloatArray) -> FloatArray:
        if not self.spherical:
            return chord
        return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))

    def distance_to_chord(self, distance: float) -> float:
        if not self.spherical:
            return distance
        return 2.0 * math.sin(min(max(distance, 0.0), math.pi) / 2.0)

    @cached_property
    def window_boundary(self) -> BoolArray:
        """Cells on lattice edges that neither wrap nor merge through a pole."""
        edge = np.zeros(self.shape, dtype=bool)
        if not self.merge_top:
            edge[0, :] = True
        if not self.merge_bottom:
            edge[-1, :] = True
        if not self.wrap_cols:
            edge[:, 0] = True
            edge[:, -1] = True
        return edge.ravel()

    def neighbor_any(self, mask: BoolArray, connectivity: Optional[Connectivity] = None) -> BoolArray:
        """For each cell, whether some adjacent cell (itself excluded) is set in ``mask``."""
        conn = connectivity or default_connectivity()
        m = np.asarray(mask, dtype=bool).reshape(self.shape)
        padded = np.zeros((self.rows + 2, self.cols + 2), dtype=bool)
        padded[1:-1, 1:-1] = m
        if self.wrap_cols:
            padded[1:-1, 0] = m[:, -1]
            padded[1:-1, -1] = m[:, 0]
        out = np.zeros(self.shape, dtype=bool)
        for dr, dc in neighbor_offsets(conn):
            out |= padded[1 + dr : 1 + dr + self.rows, 1 + dc : 1 + dc + self.cols]
        if self.merge_top:
            out[0] |= (np.count_nonzero(m[0]) - m[0].astype(np.int64)) > 0
        if self.merge_bottom:
            out[-1] |= (np.count_nonzero(m[-1]) - m[-1].astype(np.int64)) > 0
        return out.ravel()

    def neighbors(self, index: int, connectivity: Optional[Connectivity] = None) -> List[int]:
        conn = connectivity or default_connectivity()
        r, c = divmod(int(index), self.cols)
        found: set[int] = set()
        for dr, dc in neighbor_offsets(conn):
            rr, cc = r + dr, c + dc
            if not 0 <= rr < self.rows:
                continue
            if self.wrap_cols:
                cc %= self.cols
            elif not 0 <= cc < self.cols:
                continue
            found.add(rr * self.cols + cc)
        if self.merge_top and r == 0:
            found.update(range(self.cols))
        if self.merge_bottom and r == self.rows - 1:
            found.update(range((self.rows - 1) * self.cols, self.size))
        found.discard(int(index))
        return sorted(found)

    def adjacency(self, connectivity: Optional[Connectivity] = None) -> List[List[int]]:
        return [self.neighbors(i, connectivity) for i in range(self.size)]

    def document(self, connectivity: Optional[Connectivity] = None, include_adjacency: bool = True) -> JSONDict:
        conn = connectivity or default_connectivity()
        doc: JSONDict = {
            **self.descriptor(),
            "connectivity": conn.value,
            "cell_area": self.cell_area.tolist(),
        }
        if self.spherical:
            doc["centers_latlon"] = points_to_latlon(self.positions).tolist()
        else:
            doc["centers_xy"] = self.positions.tolist()
        if include_adjacency:
            doc["adjacency"] = self.adjacency(conn)  # type: ignore[assignment]
        return doc


@dataclass(frozen=True, eq=False)
class SphereGrid(LatticeGrid):
    """Iso-latitude grid from the north pole down to ``colat_max`` (pi for the whole sphere)."""

    colat_max: float = math.pi

    wrap_cols = True
    merge_top = True
    kind = "sphere"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 0.0 < self.colat_max <= math.pi:
            raise DomainError(f"colat_max must lie in (0, pi], got {self.colat_max!r}")

    @classmethod
    def global_grid(cls, n_lat: int) -> SphereGrid:
        return cls(n_lat, 2 * n_lat)

    @property
    def merge_bottom(self) -> bool:  # type: ignore[override]
        return self.colat_max >= math.pi

    @property
    def n_lat(self) -> int:
        return self.rows

    @property
    def n_lon(self) -> int:
        return self.cols

    @property
    def dtheta(self) -> float:
        return self.colat_max / self.rows

    @property
    def dphi(self) -> float:
        return 2.0 * math.pi / self.cols

    @property
    def spacing(self) -> float:
        return max(self.dtheta, self.dphi)

    @cached_property
    def colat_edges(self) -> FloatArray:
        return np.linspace(0.0, self.colat_max, self.rows + 1)

    @cached_property
    def row_colatitudes(self) -> FloatArray:
        return 0.5 * (self.colat_edges[:-1] + self.colat_edges[1:])

    @cached_property
    def col_longitudes(self) -> FloatArray:
        return (np.arange(self.cols) + 0.5) * self.dphi

    @cached_property
    def positions(self) -> FloatArray:
        theta = np.repeat(self.row_colatitudes, self.cols)
        phi = np.tile(self.col_longitudes, self.rows)
        st = np.sin(theta)
        return np.column_stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])

    @cached_property
    def cell_area(self) -> FloatArray:
        ring = self.dphi * (np.cos(self.colat_edges[:-1]) - np.cos(self.colat_edges[1:]))
        return np.repeat(ring, self.cols)

    @cached_property
    def local_coords(self) -> FloatArray:
        theta = np.repeat(self.row_colatitudes, self.cols)
        phi = np.tile(self.col_longitudes, self.rows)
        return np.column_stack([theta * np.cos(phi), theta * np.sin(phi)])

    @cached_property
    def center_distance(self) -> FloatArray:
        return np.repeat(self.row_colatitudes, self.cols)

    @property
    def center_point(self) -> SpherePoint:
        return NORTH_POLE

    def params(self) -> JSONDict:
        return {"colat_max": self.colat_max}


@dataclass(frozen=True, eq=False)
class PatchGrid(LatticeGrid):
    """Square lattice in the tangent plane at ``center`` pushed to the sphere by the exponential map."""

    center: SpherePoint = NORTH_POLE
    half_extent: float = 0.1
    angle: float = 0.0

    kind = "patch"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 0.0 < self.half_extent * math.sqrt(2.0) < math.pi:
            raise DomainError("patch must stay within distance pi of its centre")

    @classmethod
    def square(cls, center: SpherePoint, half_extent: float, n: int, angle: float = 0.0) -> PatchGrid:
        return cls(n, n, center=center, half_extent=half_extent, angle=angle)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / max(self.rows, self.cols)

    @property
    def frame(self) -> Tuple[FloatArray, FloatArray]:
        return rotated_frame(self.center, self.angle)

    @cached_property
    def local_coords(self) -> FloatArray:
        a = self.half_extent
        ys = -a + (np.arange(self.rows) + 0.5) * (2.0 * a / self.rows)
        xs = -a + (np.arange(self.cols) + 0.5) * (2.0 * a / self.cols)
        gy, gx = np.meshgrid(ys, xs, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])

    @cached_property
    def positions(self) -> FloatArray:
        return exp_map_array(self.center, self.local_coords, self.frame)

    @cached_property
    def cell_area(self) -> FloatArray:
        rho = np.linalg.norm(self.local_coords, axis=1)
        jac = np.where(rho > 0.0, np.sin(rho) / np.where(rho > 0.0, rho, 1.0), 1.0)
        h_y = 2.0 * self.half_extent / self.rows
        h_x = 2.0 * self.half_extent / self.cols
        return jac * h_x * h_y

    @property
    def center_point(self) -> SpherePoint:
        return self.center

    def params(self) -> JSONDict:
        return {"center": list(self.center.v), "half_extent": self.half_extent, "angle": self.angle}


@dataclass(frozen=True, eq=False)
class PlanarGrid(LatticeGrid):
    """Origin-centred square of side ``side_length`` with cell centres at -L/2 + (i + 1/2) h."""

    side_length: float = 1.0

    spherical = False
    kind = "planar"

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.side_length > 0.0:
            raise DomainError(f"side length must be positive, got {self.side_length!r}")

    @classmethod
    def square(cls, side_length: float, n: int) -> PlanarGrid:
        return cls(n, n, side_length=side_length)

    @property
    def n(self) -> int:
        return self.cols

    @property
    def spacing(self) -> float:
        return self.side_length / self.cols

    @cached_property
    def local_coords(self) -> FloatArray:
        h_x = self.side_length / self.cols
        h_y = self.side_length / self.rows
        xs = -self.side_length / 2.0 + (np.arange(self.cols) + 0.5) * h_x
        ys = -self.side_length / 2.0 + (np.arange(self.rows) + 0.5) * h_y
        gy, gx = np.meshgrid(ys, xs, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])

    @cached_property
    def positions(self) -> FloatArray:
        return self.local_coords

    @cached_property
    def cell_area(self) -> FloatArray:
        return np.full(self.size, (self.side_length / self.cols) * (self.side_length / self.rows))

    def params(self) -> JSONDict:
        return {"side_length": self.side_length}


def _check_budget(cells: int) -> None:
    if cells > settings.grid_max_cells:
        raise ResolutionError(f"grid of {cells} cells exceeds the budget of {settings.grid_max_cells} cells")


def build_grid(
    cells_per_unit_scale: Optional[float],
    local_scale: float,
    colat_max: float = math.pi,
) -> SphereGrid:
    if cells_per_unit_scale is None:
        cells_per_unit_scale = settings.cells_per_scale
    if cells_per_unit_scale < settings.cells_per_scale:
        raise ResolutionError(
            f"{cells_per_unit_scale:g} cells per local scale is below the minimum of {settings.cells_per_scale:g}"
        )
    if not local_scale > 0.0:
        raise DomainError(f"local scale must be positive, got {local_scale!r}")
    step = local_scale / cells_per_unit_scale
    n_lat_sphere = int(math.ceil(math.pi / step))
    n_lat = max(1, int(math.ceil(colat_max / step)))
    n_lon = 2 * n_lat_sphere
    _check_budget(n_lat * n_lon)
    grid = SphereGrid(n_lat, n_lon, colat_max=colat_max)
    log.debug("sphere grid %dx%d spacing %.3g (colat_max %.4g)", n_lat, n_lon, grid.spacing, colat_max)
    return grid


def build_planar_grid(side_length: float, cells_per_unit: Optional[float] = None) -> PlanarGrid:
    if cells_per_unit is None:
        cells_per_unit = settings.planar_cells_per_unit
    n = max(1, int(math.ceil(side_length * cells_per_unit)))
    _check_budget(n * n)
    return PlanarGrid.square(side_length, n)


def build_patch_grid(center: SpherePoint, half_extent: float, spacing: float, angle: float = 0.0) -> PatchGrid:
    n = max(1, int(math.ceil(2.0 * half_extent / spacing)))
    _check_budget(n * n)
    return PatchGrid.square(center, half_extent, n, angle)


def grid_from_descriptor(doc: Dict[str, object]) -> LatticeGrid:
    kind = doc.get("kind")
    rows, cols = int(doc["rows"]), int(doc["cols"])  # type: ignore[call-overload]
    if kind == "sphere":
        return SphereGrid(rows, cols, colat_max=float(doc.get("colat_max", math.pi)))  # type: ignore[arg-type]
    if kind == "patch":
        center = SpherePoint(tuple(doc["center"]))  # type: ignore[arg-type]
        return PatchGrid(rows, cols, center=center, half_extent=float(doc["half_extent"]), angle=float(doc.get("angle", 0.0)))  # type: ignore[arg-type]
    if kind == "planar":
        return PlanarGrid(rows, cols, side_length=float(doc["side_length"]))  # type: ignore[arg-type]
    raise DomainError(f"unknown grid kind {kind!r}")


def distances_from(grid: LatticeGrid, point: object) -> FloatArray:
    if grid.spherical:
        return sph_dist_array(grid.positions, as_array(point))  # type: ignore[arg-type]
    return np.linalg.norm(grid.positions - np.asarray(point, dtype=float), axis=1)
