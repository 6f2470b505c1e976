"""
Connected components of excursion sets.

Components inside the lattice are found with ``scipy.ndimage.label``; a disjoint-set pass
then merges labels across the longitude seam and through the polar caps, where all cells
of the first (last) row are mutually adjacent.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from importlib import import_module
from typing import Callable, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from custom_types.json import JSONDict
from engine.enums import Connectivity
from engine.excursion.mask import ExcursionMask
from engine.geometry.grid import BoolArray, default_connectivity
from engine.geometry.sphere import FloatArray

log = logging.getLogger(__name__)

IntArray = NDArray[np.int64]

_ndimage = import_module("scipy.ndimage")
ndimage_label: Callable[..., Tuple[NDArray[np.int32], int]] = _ndimage.label

_STRUCTURES = {
    Connectivity.moore: np.ones((3, 3), dtype=bool),
    Connectivity.von_neumann: np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool),
}


class DisjointSet:
    """Union-find over 0..n-1 with path halving; the smaller root always wins."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry

    def roots(self) -> IntArray:
        return np.array([self.find(i) for i in range(len(self.parent))], dtype=np.int64)


@dataclass(frozen=True)
class Component:
    id: int
    area: float
    cells: int
    representative: int


@dataclass(frozen=True, eq=False)
class ComponentLabeling:
    mask: ExcursionMask
    connectivity: Connectivity
    labels: IntArray
    components: Tuple[Component, ...]

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def areas(self) -> FloatArray:
        return np.array([c.area for c in self.components], dtype=float)

    @property
    def sizes(self) -> IntArray:
        return np.array([c.cells for c in self.components], dtype=np.int64)

    @property
    def representatives(self) -> IntArray:
        return np.array([c.representative for c in self.components], dtype=np.int64)

    def cells_of(self, component: int) -> IntArray:
        return np.flatnonzero(self.labels == component)

    def member_mask(self, component: int) -> BoolArray:
        return self.labels == component

    @cached_property
    def touching_boundary(self) -> frozenset[int]:
        """Components containing a cell on an open edge of the lattice."""
        hit = self.labels[self.mask.grid.window_boundary]
        return frozenset(int(i) for i in np.unique(hit[hit >= 0]))

    def partition(self) -> List[List[int]]:
        """Cell index lists per component, in component order."""
        order = np.argsort(self.labels, kind="stable")
        sorted_labels = self.labels[order]
        start = np.searchsorted(sorted_labels, 0)
        cuts = np.searchsorted(sorted_labels, np.arange(1, self.count))
        return [part.tolist() for part in np.split(order[start:], cuts - start)] if self.count else []

    def rows(self, replicate: int = 0) -> List[JSONDict]:
        boundary = self.touching_boundary
        return [
            {
                "replicate": replicate,
                "level": self.mask.level,
                "component": c.id,
                "area": c.area,
                "cells": c.cells,
                "touches_boundary": c.id in boundary,
            }
            for c in self.components
        ]


def _seam_pairs(raw: NDArray[np.int32], connectivity: Connectivity) -> List[Tuple[int, int]]:
    left, right = raw[:, 0], raw[:, -1]
    shifts = (-1, 0, 1) if connectivity is Connectivity.moore else (0,)
    rows = raw.shape[0]
    pairs: List[Tuple[int, int]] = []
    for dr in shifts:
        lo, hi = max(0, -dr), min(rows, rows - dr)
        a = right[lo:hi]
        b = left[lo + dr : hi + dr]
        both = (a > 0) & (b > 0)
        pairs.extend(zip(a[both].tolist(), b[both].tolist()))
    return pairs


def _merge_row(ds: DisjointSet, row: NDArray[np.int32]) -> None:
    present = np.unique(row[row > 0])
    for lab in present[1:]:
        ds.union(int(present[0]), int(lab))


def label_components(mask: ExcursionMask, connectivity: Optional[Connectivity] = None) -> ComponentLabeling:
    """Components of ``mask`` with ids ordered by their smallest cell index, which is also the representative."""
    conn = connectivity or default_connectivity()
    grid = mask.grid
    image = mask.inside.reshape(grid.shape)
    raw, n = ndimage_label(image, structure=_STRUCTURES[conn])
    ds = DisjointSet(n + 1)
    if grid.wrap_cols and grid.cols > 1:
        for a, b in _seam_pairs(raw, conn):
            ds.union(a, b)
    if grid.merge_top:
        _merge_row(ds, raw[0])
    if grid.merge_bottom:
        _merge_row(ds, raw[-1])

    flat = raw.ravel()
    labels = np.full(grid.size, -1, dtype=np.int64)
    inside = np.flatnonzero(flat)
    if inside.size == 0:
        return ComponentLabeling(mask, conn, labels, ())
    roots = ds.roots()[flat[inside]]
    unique_roots, first = np.unique(roots, return_index=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty(unique_roots.size, dtype=np.int64)
    rank[order] = np.arange(unique_roots.size)
    ids = rank[np.searchsorted(unique_roots, roots)]
    labels[inside] = ids
    k = unique_roots.size
    areas = np.bincount(ids, weights=grid.cell_area[inside], minlength=k)
    sizes = np.bincount(ids, minlength=k)
    reps = inside[first[order]]
    components = tuple(
        Component(int(i), float(areas[i]), int(sizes[i]), int(reps[i])) for i in range(k)
    )
    log.debug("labelled %d components among %d cells (%s)", k, inside.size, conn.value)
    return ComponentLabeling(mask, conn, labels, components)
