"""
(u, eps)-tilings of caps and squares by congruent spherical squares, built by mapping
the planar square lattice through the exponential map, and their axiom checks.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import import_module
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from config import settings
from custom_types.json import JSONDict
from engine.enums import TilingProperty
from engine.exceptions import DomainError, InfeasibleTilingError
from engine.geometry.sphere import (
    FloatArray,
    Region,
    SphereSquare,
    SphericalCap,
    angle_to_chord,
    exp_map_array,
    points_to_latlon,
    region_boundary,
    region_center,
    region_contains,
    sample_region,
    square_area,
)

log = logging.getLogger(__name__)

_spatial = import_module("scipy.spatial")
_csgraph = import_module("scipy.sparse.csgraph")
_sparse = import_module("scipy.sparse")
cKDTree: Callable[..., object] = _spatial.cKDTree
connected_components: Callable[..., tuple[int, NDArray[np.int32]]] = _csgraph.connected_components

_MAX_MARGIN = 0.25
_EDGE_SAMPLES = 16


def area_factor(rho: float) -> float:
    return 1.0 if rho == 0.0 else math.sin(rho) / rho


def tiling_margin(u: float, extent: float) -> float:
    reach = min(extent, math.pi / 2.0 - 1e-6)
    eta = settings.tiling_overlap_margin + settings.tiling_curvature_margin * u * math.tan(reach)
    return min(eta, _MAX_MARGIN)


def overlap_error(u: float, extent: float) -> float:
    """Area lost to overlap by one mapped lattice cell at distance ``extent`` from the centre."""
    if extent >= math.pi / 2.0 or u <= 0.0:
        return 1.0
    eta = tiling_margin(u, extent)
    return 1.0 - area_factor(extent) * (1.0 - eta) ** 2 * 4.0 * u * u / square_area(u)


@lru_cache(maxsize=128)
def curvature_threshold(eps: float, extent: float) -> float:
    """Largest u whose overlap error stays below eps/2 for a region of the given extent."""
    target = eps / 2.0
    hi = min(math.pi / 4.0, extent)
    lo = 1e-9
    if hi <= lo or overlap_error(lo, extent) >= target:
        return 0.0
    if overlap_error(hi, extent) < target:
        return hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if overlap_error(mid, extent) < target:
            lo = mid
        else:
            hi = mid
    return lo


def region_radius(region: Region) -> float:
    if isinstance(region, SphericalCap):
        return region.radius
    return region.half_side


def count_bound(region: Region, u: float, eps: float) -> float:
    return max(1.0, region.area * (1.0 + eps) / square_area(u))


@dataclass(frozen=True, eq=False)
class Tiling:
    tiles: Tuple[SphereSquare, ...]
    region: Region
    eps: float
    half_side: float
    lattice: Optional[NDArray[np.int64]] = None

    @property
    def n(self) -> int:
        return len(self.tiles)

    @cached_property
    def centers(self) -> FloatArray:
        if not self.tiles:
            return np.empty((0, 3))
        return np.array([t.center_array for t in self.tiles])

    @cached_property
    def frames(self) -> Tuple[FloatArray, FloatArray]:
        if not self.tiles:
            return np.empty((0, 3)), np.empty((0, 3))
        return np.array([t.frame[0] for t in self.tiles]), np.array([t.frame[1] for t in self.tiles])

    def without(self, indices: Sequence[int]) -> Tiling:
        drop = set(int(i) for i in indices)
        kept = tuple(t for i, t in enumerate(self.tiles) if i not in drop)
        return Tiling(kept, self.region, self.eps, self.half_side)

    def document(self) -> JSONDict:
        if isinstance(self.region, SphericalCap):
            region: JSONDict = {"kind": "cap", "center": list(self.region.center.v), "radius": self.region.radius}
        else:
            region = {"kind": "square", "rotation": self.region.rotation.tolist(), "half_side": self.region.half_side}
        latlon = points_to_latlon(self.centers) if self.tiles else np.empty((0, 2))
        return {
            "half_side": self.half_side,
            "eps": self.eps,
            "region": region,
            "tiles": [
                {"center_latlon": latlon[i].tolist(), "rotation": t.rotation.tolist(), "half_side": t.half_side}
                for i, t in enumerate(self.tiles)
            ],
        }


def _transported_frames(
    center: FloatArray, frame: Tuple[FloatArray, FloatArray], w: FloatArray
) -> Tuple[FloatArray, FloatArray, FloatArray]:
    """Tile centres and the region frame parallel-transported along each radial geodesic."""
    e1, e2 = frame
    rho = np.linalg.norm(w, axis=1)
    safe = np.where(rho > 0.0, rho, 1.0)
    tx = np.where(rho > 0.0, w[:, 0] / safe, 1.0)
    ty = np.where(rho > 0.0, w[:, 1] / safe, 0.0)
    radial = np.outer(tx, e1) + np.outer(ty, e2)
    normal = np.outer(tx, e2) - np.outer(ty, e1)
    moved = -np.sin(rho)[:, None] * center + np.cos(rho)[:, None] * radial
    centers = np.cos(rho)[:, None] * center + np.sin(rho)[:, None] * radial
    f1 = tx[:, None] * moved - ty[:, None] * normal
    f2 = ty[:, None] * moved + tx[:, None] * normal
    return centers, f1, f2


def _square(center: FloatArray, f1: FloatArray, f2: FloatArray, u: float) -> SphereSquare:
    c = center / np.linalg.norm(center)
    e1 = f1 - np.dot(f1, c) * c
    e1 = e1 / np.linalg.norm(e1)
    return SphereSquare(np.column_stack([e1, np.cross(c, e1), c]), u)


def build_tiling(u: float, eps: float, region: Region, strict: bool = True) -> Tiling:
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    if not 0.0 < u <= math.pi / 2.0:
        raise DomainError(f"tile half side must lie in (0, pi/2], got {u!r}")
    if isinstance(region, SphericalCap) and region.empty:
        raise DomainError("cannot tile an empty cap")
    center = region_center(region)
    frame = region.frame
    if region_radius(region) <= u:
        tile = _square(center, frame[0], frame[1], u)
        return Tiling((tile,), region, eps, u, np.zeros((1, 2), dtype=np.int64))

    extent = region.extent
    rho = curvature_threshold(eps, extent)
    if strict and u >= rho:
        raise InfeasibleTilingError(
            f"u={u:g} is not below the curvature threshold {rho:.6g} for eps={eps:g} and extent {extent:.6g}"
        )
    eta = tiling_margin(u, extent)
    step = 2.0 * u * (1.0 - eta)
    reach = min(extent + 1.5 * u, math.pi)
    k = int(math.floor(reach / step))
    ii, jj = np.meshgrid(np.arange(-k, k + 1), np.arange(-k, k + 1), indexing="ij")
    lattice = np.column_stack([ii.ravel(), jj.ravel()]).astype(np.int64)
    w = lattice * step
    keep = np.linalg.norm(w, axis=1) <= reach
    lattice, w = lattice[keep], w[keep]
    centers, f1, f2 = _transported_frames(center, frame, w)
    candidates = [_square(centers[i], f1[i], f2[i], u) for i in range(len(centers))]

    hit = np.zeros(len(candidates), dtype=bool)
    for i, tile in enumerate(candidates):
        probe = np.vstack([tile.center_array[None, :], tile.boundary_samples(_EDGE_SAMPLES // 2)])
        hit[i] = bool(np.any(region_contains(region, probe)))
    boundary = region_boundary(region, max(64, int(math.ceil(8.0 * math.pi * max(extent, u) / u))))
    if len(boundary) and not np.all(hit):
        tree = cKDTree(centers)
        near = tree.query_ball_point(boundary, angle_to_chord(math.sqrt(2.0) * u * 1.01))  # type: ignore[attr-defined]
        for b, idxs in zip(boundary, near):
            for i in idxs:
                if not hit[i] and bool(candidates[i].contains(b, strict=False)[0]):
                    hit[i] = True
    tiles = tuple(t for t, h in zip(candidates, hit) if h)
    tiling = Tiling(tiles, region, eps, u, lattice[hit])
    bound = count_bound(region, u, eps)
    log.debug("tiling u=%g eps=%g extent=%.4g: %d tiles (bound %.1f, margin %.4g)", u, eps, extent, tiling.n, bound, eta)
    if strict and tiling.n > bound:
        raise InfeasibleTilingError(f"{tiling.n} tiles exceed the count bound {bound:.1f} for u={u:g}, eps={eps:g}")
    return tiling


@dataclass(frozen=True)
class TilingFailure:
    prop: TilingProperty
    message: str
    witness: JSONDict = field(default_factory=dict)


@dataclass(frozen=True)
class TilingReport:
    n: int
    half_side: float
    eps: float
    covered_fraction: float
    min_exclusive_fraction: float
    count_bound: float
    max_neighbors: int
    isoperimetry_trials: int
    failures: Tuple[TilingFailure, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def failed(self, prop: TilingProperty) -> bool:
        return any(f.prop is prop for f in self.failures)


def _local_coords_batch(centers: FloatArray, e1: FloatArray, e2: FloatArray, points: FloatArray) -> FloatArray:
    """Log-map coordinates of ``points[m, k]`` in the frame of tile ``m``."""
    dots = np.einsum("mkd,md->mk", points, centers)
    perp = points - dots[..., None] * centers[:, None, :]
    sin_d = np.linalg.norm(perp, axis=-1)
    d = np.arctan2(sin_d, dots)
    scale = np.where(sin_d > 0.0, d / np.where(sin_d > 0.0, sin_d, 1.0), 0.0)
    x = np.einsum("mkd,md->mk", perp, e1) * scale
    y = np.einsum("mkd,md->mk", perp, e2) * scale
    antipodal = (sin_d < 1e-12) & (dots < 0.0)
    x[antipodal] = np.inf
    return np.stack([x, y], axis=-1)


def _tile_pairs(t: Tiling, radius: float) -> NDArray[np.int64]:
    if t.n < 2:
        return np.empty((0, 2), dtype=np.int64)
    tree = cKDTree(t.centers)
    pairs = tree.query_pairs(angle_to_chord(radius), output_type="ndarray")  # type: ignore[attr-defined]
    return np.asarray(pairs, dtype=np.int64).reshape(-1, 2)


def _check_coverage(t: Tiling, rng: np.random.Generator) -> Tuple[float, Optional[TilingFailure]]:
    count = settings.tiling_coverage_samples * max(t.n, 50)
    pts = np.vstack([sample_region(t.region, count, rng), region_boundary(t.region, 256)])
    if t.n == 0:
        return 0.0, TilingFailure(TilingProperty.coverage, "no tiles", {"point_latlon": points_to_latlon(pts[:1])[0].tolist()})
    k = min(t.n, 12)
    tree = cKDTree(t.centers)
    _, idx = tree.query(pts, k=k)  # type: ignore[attr-defined]
    idx = np.asarray(idx).reshape(len(pts), k)
    e1, e2 = t.frames
    covered = np.zeros(len(pts), dtype=bool)
    for col in range(k):
        tiles = idx[:, col]
        w = _local_coords_batch(t.centers[tiles], e1[tiles], e2[tiles], pts[:, None, :])[:, 0, :]
        covered |= np.max(np.abs(w), axis=1) <= t.half_side + 1e-12
    frac = float(np.mean(covered))
    if covered.all():
        return frac, None
    miss = int(np.flatnonzero(~covered)[0])
    witness: JSONDict = {"point_latlon": points_to_latlon(pts[miss : miss + 1])[0].tolist(), "uncovered": int(np.sum(~covered))}
    return frac, TilingFailure(TilingProperty.coverage, f"{int(np.sum(~covered))} of {len(pts)} region samples uncovered", witness)


def _check_exclusive(t: Tiling, pairs: NDArray[np.int64]) -> Tuple[float, Optional[TilingFailure]]:
    if t.n == 0:
        return 0.0, None
    per_side = settings.tiling_cell_samples
    template = SphereSquare(np.eye(3), t.half_side)
    local_pts, weights = template.grid_samples(per_side)
    e1, e2 = t.frames
    # samples of every tile: rotate the template from the north-pole frame into each tile frame
    rot = np.stack([e1, e2, t.centers], axis=2)
    samples = np.einsum("nij,kj->nki", rot, local_pts)
    overlapped = np.zeros((t.n, len(weights)), dtype=bool)
    for a, b in ((0, 1), (1, 0)):
        src, dst = pairs[:, a], pairs[:, b]
        if len(src) == 0:
            continue
        w = _local_coords_batch(t.centers[dst], e1[dst], e2[dst], samples[src])
        inside = np.max(np.abs(w), axis=-1) <= t.half_side + 1e-12
        np.logical_or.at(overlapped, src, inside)
    exclusive = (~overlapped) @ weights / float(np.sum(weights))
    worst = int(np.argmin(exclusive))
    frac = float(exclusive[worst])
    if frac >= 1.0 - t.eps:
        return frac, None
    return frac, TilingFailure(
        TilingProperty.exclusive_area,
        f"tile {worst} keeps only {frac:.4f} of its area exclusively (need {1.0 - t.eps:.4f})",
        {"tile": worst, "fraction": frac},
    )


def _u_connected_edges(t: Tiling, pairs: NDArray[np.int64]) -> NDArray[np.int64]:
    if len(pairs) == 0:
        return pairs
    u = t.half_side
    template = SphereSquare(np.eye(3), u)
    edge_local = template.boundary_samples(_EDGE_SAMPLES)
    e1, e2 = t.frames
    rot = np.stack([e1, e2, t.centers], axis=2)
    edge = np.einsum("nij,kj->nki", rot, edge_local)
    best = np.full(len(pairs), np.inf)
    for a, b in ((0, 1), (1, 0)):
        src, dst = pairs[:, a], pairs[:, b]
        w = _local_coords_batch(t.centers[dst], e1[dst], e2[dst], edge[src])
        excess = np.clip(np.abs(w) - u, 0.0, None)
        dist = np.linalg.norm(excess, axis=-1)
        best = np.minimum(best, np.min(dist, axis=1))
    return pairs[best <= u]


def _check_neighbors(t: Tiling, edges: NDArray[np.int64]) -> Tuple[int, Optional[TilingFailure]]:
    degree = np.bincount(edges.ravel(), minlength=t.n) if len(edges) else np.zeros(t.n, dtype=np.int64)
    most = int(degree.max()) if t.n else 0
    if most <= 8:
        return most, None
    tile = int(np.argmax(degree))
    return most, TilingFailure(
        TilingProperty.local_boundedness,
        f"tile {tile} is u-connected to {most} tiles",
        {"tile": tile, "neighbors": most},
    )


def _check_isoperimetry(
    t: Tiling, edges: NDArray[np.int64], rng: np.random.Generator
) -> Tuple[int, Optional[TilingFailure]]:
    n = t.n
    if n == 0:
        return 0, None
    data = np.ones(len(edges), dtype=np.int8)
    graph = _sparse.csr_matrix((data, (edges[:, 0], edges[:, 1])), shape=(n, n)) if len(edges) else _sparse.csr_matrix((n, n))
    trials = 0
    for s in range(0, int(math.ceil(math.sqrt(n))) + 1):
        need = n - 4 * s * s
        if s > 0 and need <= 1:
            break
        for _ in range(settings.tiling_isoperimetry_trials if s > 0 else 1):
            trials += 1
            deleted = rng.choice(n, size=s, replace=False) if s else np.empty(0, dtype=np.int64)
            alive = np.ones(n, dtype=bool)
            alive[deleted] = False
            keep = np.flatnonzero(alive)
            sub = graph[keep][:, keep]
            _, labels = connected_components(sub, directed=False)
            largest = int(np.bincount(labels).max()) if len(labels) else 0
            if largest < need:
                return trials, TilingFailure(
                    TilingProperty.isoperimetry,
                    f"after deleting {s} tiles the largest u-connected set has {largest} < {need} tiles",
                    {"s": s, "deleted": [int(d) for d in deleted], "largest": largest},
                )
    return trials, None


def check_tiling(t: Tiling, seed: int = 0) -> TilingReport:
    rng = np.random.default_rng(seed)
    failures: List[TilingFailure] = []
    covered, fail = _check_coverage(t, rng)
    if fail:
        failures.append(fail)
    pairs = _tile_pairs(t, (2.0 * math.sqrt(2.0) + 1.0) * t.half_side * 1.01)
    exclusive, fail = _check_exclusive(t, pairs)
    if fail:
        failures.append(fail)
    bound = count_bound(t.region, t.half_side, t.eps)
    if t.n > bound:
        failures.append(
            TilingFailure(TilingProperty.count_bound, f"{t.n} tiles exceed the bound {bound:.2f}", {"n": t.n, "bound": bound})
        )
    edges = _u_connected_edges(t, pairs)
    most, fail = _check_neighbors(t, edges)
    if fail:
        failures.append(fail)
    trials, fail = _check_isoperimetry(t, edges, rng)
    if fail:
        failures.append(fail)
    report = TilingReport(
        n=t.n,
        half_side=t.half_side,
        eps=t.eps,
        covered_fraction=covered,
        min_exclusive_fraction=exclusive,
        count_bound=bound,
        max_neighbors=most,
        isoperimetry_trials=trials,
        failures=tuple(failures),
    )
    for f in report.failures:
        log.info("tiling check failed (%s): %s", f.prop.value, f.message)
    return report
