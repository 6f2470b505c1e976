"""
Points, distances, exponential and logarithm maps, caps and squares on the unit sphere.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import import_module
from typing import Callable, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config import FOUR_PI
from engine.exceptions import AntipodalPointError, DomainError

FloatArray = NDArray[np.float64]

roots_legendre: Callable[[int], tuple[FloatArray, FloatArray]] = import_module("scipy.special").roots_legendre

_ANTIPODAL_TOL = 1e-12
_CONTAINS_SLACK = 1e-12


def _unit(v: ArrayLike) -> FloatArray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise DomainError(f"expected a finite 3-vector, got {v!r}")
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise DomainError("zero vector has no direction")
    return arr / norm


@dataclass(frozen=True)
class SpherePoint:
    v: Tuple[float, float, float]

    def __post_init__(self) -> None:
        unit = _unit(self.v)
        object.__setattr__(self, "v", (float(unit[0]), float(unit[1]), float(unit[2])))

    @classmethod
    def from_latlon(cls, lat: float, lon: float) -> SpherePoint:
        return cls((math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)))

    @classmethod
    def from_colatitude(cls, colat: float, lon: float = 0.0) -> SpherePoint:
        return cls.from_latlon(math.pi / 2.0 - colat, lon)

    @property
    def array(self) -> FloatArray:
        return np.array(self.v, dtype=float)

    @property
    def latlon(self) -> tuple[float, float]:
        x, y, z = self.v
        return math.asin(max(-1.0, min(1.0, z))), math.atan2(y, x)

    def antipode(self) -> SpherePoint:
        x, y, z = self.v
        return SpherePoint((-x, -y, -z))


NORTH_POLE = SpherePoint((0.0, 0.0, 1.0))

PointLike = Union[SpherePoint, ArrayLike]


def as_array(p: PointLike) -> FloatArray:
    if isinstance(p, SpherePoint):
        return p.array
    return np.asarray(p, dtype=float)


def sph_dist(x: PointLike, y: PointLike) -> float:
    a, b = as_array(x), as_array(y)
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), float(np.dot(a, b)))


def sph_dist_array(points: FloatArray, y: PointLike) -> FloatArray:
    """Distances from every row of ``points`` to ``y``."""
    b = as_array(y)
    cross = np.linalg.norm(np.cross(points, b), axis=-1)
    return np.arctan2(cross, points @ b)


def chord_to_angle(chord: ArrayLike) -> FloatArray:
    return 2.0 * np.arcsin(np.clip(np.asarray(chord, dtype=float) / 2.0, 0.0, 1.0))


def angle_to_chord(angle: float) -> float:
    return 2.0 * math.sin(min(max(angle, 0.0), math.pi) / 2.0)


def tangent_frame(base: PointLike) -> tuple[FloatArray, FloatArray]:
    """Fixed orthonormal tangent frame (e1, e2) at ``base``; at the north pole it is (x, y)."""
    b = _unit(as_array(base))
    if abs(b[2]) < 0.9:
        e1 = np.cross(np.array([0.0, 0.0, 1.0]), b)
    else:
        e1 = np.array([1.0, 0.0, 0.0]) - b[0] * b
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(b, e1)
    return e1, e2


def rotated_frame(base: PointLike, angle: float) -> tuple[FloatArray, FloatArray]:
    e1, e2 = tangent_frame(base)
    c, s = math.cos(angle), math.sin(angle)
    return c * e1 + s * e2, -s * e1 + c * e2


def exp_map_array(
    base: PointLike,
    tangents: ArrayLike,
    frame: tuple[FloatArray, FloatArray] | None = None,
) -> FloatArray:
    b = _unit(as_array(base))
    w = np.asarray(tangents, dtype=float).reshape(-1, 2)
    norms = np.linalg.norm(w, axis=1)
    if np.any(norms > math.pi + 1e-12):
        raise DomainError("tangent vectors must have norm at most pi")
    e1, e2 = frame if frame is not None else tangent_frame(b)
    direction = np.outer(w[:, 0], e1) + np.outer(w[:, 1], e2)
    safe = np.where(norms > 0.0, norms, 1.0)
    unit_dir = direction / safe[:, None]
    out = np.cos(norms)[:, None] * b + np.sin(norms)[:, None] * unit_dir
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def exp_map(base: PointLike, tangent: ArrayLike, frame: tuple[FloatArray, FloatArray] | None = None) -> SpherePoint:
    return SpherePoint(tuple(exp_map_array(base, tangent, frame)[0]))  # type: ignore[arg-type]


def log_map_array(
    base: PointLike,
    points: ArrayLike,
    frame: tuple[FloatArray, FloatArray] | None = None,
    strict: bool = True,
) -> FloatArray:
    """Tangent coordinates of ``points`` at ``base``; antipodal points raise unless ``strict`` is off (then NaN)."""
    b = _unit(as_array(base))
    x = np.asarray(points, dtype=float).reshape(-1, 3)
    e1, e2 = frame if frame is not None else tangent_frame(b)
    dots = x @ b
    perp = x - dots[:, None] * b
    sin_d = np.linalg.norm(perp, axis=1)
    antipodal = (sin_d < _ANTIPODAL_TOL) & (dots < 0.0)
    if strict and np.any(antipodal):
        raise AntipodalPointError("logarithm map is undefined at the antipode of the base point")
    d = np.arctan2(sin_d, dots)
    safe = np.where(sin_d > 0.0, sin_d, 1.0)
    scale = np.where(sin_d > 0.0, d / safe, 0.0)
    out = np.column_stack([(perp @ e1) * scale, (perp @ e2) * scale])
    out[antipodal] = np.nan
    return out


def log_map(base: PointLike, point: PointLike, frame: tuple[FloatArray, FloatArray] | None = None) -> FloatArray:
    return log_map_array(base, as_array(point), frame)[0]


def rotation_about(axis: ArrayLike, angle: float) -> FloatArray:
    k = _unit(axis)
    kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * kx + (1.0 - math.cos(angle)) * (kx @ kx)


def random_rotation(seed: int) -> FloatArray:
    rotation_cls = import_module("scipy.spatial.transform").Rotation
    return np.asarray(rotation_cls.random(random_state=seed).as_matrix(), dtype=float)


def cap_area(r: float) -> float:
    if r <= 0.0:
        return 0.0
    if r >= math.pi:
        return FOUR_PI
    return 2.0 * math.pi * (1.0 - math.cos(r))


@dataclass(frozen=True)
class SphericalCap:
    center: SpherePoint
    radius: float

    @property
    def empty(self) -> bool:
        return self.radius < 0.0

    @property
    def full(self) -> bool:
        return self.radius > math.pi

    @property
    def area(self) -> float:
        return cap_area(self.radius)

    @property
    def extent(self) -> float:
        return min(max(self.radius, 0.0), math.pi)

    @property
    def frame(self) -> tuple[FloatArray, FloatArray]:
        return tangent_frame(self.center)

    def contains(self, points: ArrayLike) -> NDArray[np.bool_]:
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        if self.empty:
            return np.zeros(len(pts), dtype=bool)
        if self.full:
            return np.ones(len(pts), dtype=bool)
        return sph_dist_array(pts, self.center) <= self.radius + _CONTAINS_SLACK

    def boundary_samples(self, count: int) -> FloatArray:
        if self.empty or self.radius <= 0.0 or self.radius >= math.pi:
            return np.empty((0, 3))
        phi = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
        w = self.radius * np.column_stack([np.cos(phi), np.sin(phi)])
        return exp_map_array(self.center, w)


@dataclass(frozen=True, eq=False)
class SphereSquare:
    """Image of [-r, r]^2 under the exponential map at the third rotation column."""

    rotation: FloatArray
    half_side: float
    _frame: tuple[FloatArray, FloatArray] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        rot = np.asarray(self.rotation, dtype=float)
        if rot.shape != (3, 3) or not np.all(np.isfinite(rot)):
            raise DomainError("square rotation must be a finite 3x3 matrix")
        if not np.allclose(rot.T @ rot, np.eye(3), atol=1e-10) or abs(float(np.linalg.det(rot)) - 1.0) > 1e-10:
            raise DomainError("square rotation must be orthogonal with determinant +1")
        if not self.half_side > 0.0:
            raise DomainError(f"square half side must be positive, got {self.half_side!r}")
        rot = rot.copy()
        rot.setflags(write=False)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "half_side", min(float(self.half_side), math.pi / 2.0))
        object.__setattr__(self, "_frame", (rot[:, 0], rot[:, 1]))

    @classmethod
    def at(cls, center: PointLike, half_side: float, angle: float = 0.0) -> SphereSquare:
        c = _unit(as_array(center))
        e1, e2 = rotated_frame(c, angle)
        return cls(np.column_stack([e1, e2, c]), half_side)

    @classmethod
    def from_frame(cls, center: PointLike, frame: tuple[FloatArray, FloatArray], half_side: float) -> SphereSquare:
        c = _unit(as_array(center))
        e1 = frame[0] - np.dot(frame[0], c) * c
        e1 = e1 / np.linalg.norm(e1)
        return cls(np.column_stack([e1, np.cross(c, e1), c]), half_side)

    @property
    def center(self) -> SpherePoint:
        return SpherePoint(tuple(self.rotation[:, 2]))  # type: ignore[arg-type]

    @property
    def center_array(self) -> FloatArray:
        return np.asarray(self.rotation[:, 2])

    @property
    def frame(self) -> tuple[FloatArray, FloatArray]:
        return self._frame

    @property
    def area(self) -> float:
        return square_area(self.half_side)

    @property
    def extent(self) -> float:
        return math.sqrt(2.0) * self.half_side

    def local_coords(self, points: ArrayLike, strict: bool = True) -> FloatArray:
        return log_map_array(self.center_array, points, self._frame, strict=strict)

    def contains(self, points: ArrayLike, strict: bool = True) -> NDArray[np.bool_]:
        w = self.local_coords(points, strict=strict)
        with np.errstate(invalid="ignore"):
            return np.max(np.abs(w), axis=1) <= self.half_side + _CONTAINS_SLACK

    def box_distance(self, points: ArrayLike) -> FloatArray:
        """Euclidean distance in local coordinates from each point to [-r, r]^2 (0 inside)."""
        w = self.local_coords(points, strict=False)
        excess = np.clip(np.abs(w) - self.half_side, 0.0, None)
        out = np.linalg.norm(excess, axis=1)
        return np.where(np.isnan(out), math.pi, out)

    def grid_samples(self, per_side: int) -> tuple[FloatArray, FloatArray]:
        """Cell-centred samples of the square and their area weights."""
        r = self.half_side
        h = 2.0 * r / per_side
        ticks = -r + (np.arange(per_side) + 0.5) * h
        gx, gy = np.meshgrid(ticks, ticks, indexing="ij")
        w = np.column_stack([gx.ravel(), gy.ravel()])
        rho = np.linalg.norm(w, axis=1)
        jac = np.where(rho > 0.0, np.sin(rho) / np.where(rho > 0.0, rho, 1.0), 1.0)
        return exp_map_array(self.center_array, w, self._frame), jac * h * h

    def boundary_samples(self, per_side: int) -> FloatArray:
        r = self.half_side
        ticks = np.linspace(-r, r, per_side + 1)[:-1]
        edges = np.concatenate(
            [
                np.column_stack([ticks, np.full_like(ticks, -r)]),
                np.column_stack([np.full_like(ticks, r), ticks]),
                np.column_stack([-ticks, np.full_like(ticks, r)]),
                np.column_stack([np.full_like(ticks, -r), -ticks]),
            ]
        )
        return exp_map_array(self.center_array, edges, self._frame)

    def rotated(self, rotation: ArrayLike) -> SphereSquare:
        return SphereSquare(np.asarray(rotation, dtype=float) @ self.rotation, self.half_side)


def square_contains(sq: SphereSquare, x: PointLike) -> bool:
    return bool(sq.contains(as_array(x))[0])


@lru_cache(maxsize=256)
def square_area(half_side: float, nodes: int = 48) -> float:
    r = min(float(half_side), math.pi / 2.0)
    if r <= 0.0:
        return 0.0
    xs, ws = roots_legendre(nodes)
    pts = r * xs
    gx, gy = np.meshgrid(pts, pts, indexing="ij")
    rho = np.hypot(gx, gy)
    jac = np.where(rho > 0.0, np.sin(rho) / np.where(rho > 0.0, rho, 1.0), 1.0)
    return float(r * r * np.einsum("i,j,ij->", ws, ws, jac))


Region = Union[SphericalCap, SphereSquare]


def region_center(region: Region) -> FloatArray:
    if isinstance(region, SphericalCap):
        return region.center.array
    return region.center_array


def region_contains(region: Region, points: ArrayLike) -> NDArray[np.bool_]:
    if isinstance(region, SphericalCap):
        return region.contains(points)
    return region.contains(points, strict=False)


def region_boundary(region: Region, count: int) -> FloatArray:
    if isinstance(region, SphericalCap):
        return region.boundary_samples(count)
    return region.boundary_samples(max(1, count // 4))


def sample_region(region: Region, count: int, rng: np.random.Generator) -> FloatArray:
    """Uniform points of the region by rejection from its bounding cap."""
    center = region_center(region)
    extent = min(region.extent, math.pi)
    z_low = math.cos(extent)
    frame = tangent_frame(center)
    out: list[FloatArray] = []
    have = 0
    while have < count:
        batch = max(64, 2 * (count - have))
        z = rng.uniform(z_low, 1.0, batch)
        phi = rng.uniform(0.0, 2.0 * math.pi, batch)
        s = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        pts = (
            z[:, None] * center
            + (s * np.cos(phi))[:, None] * frame[0]
            + (s * np.sin(phi))[:, None] * frame[1]
        )
        keep = pts[region_contains(region, pts)]
        out.append(keep)
        have += len(keep)
    return np.concatenate(out)[:count]


def points_to_latlon(points: FloatArray) -> FloatArray:
    lat = np.arcsin(np.clip(points[:, 2], -1.0, 1.0))
    lon = np.arctan2(points[:, 1], points[:, 0])
    return np.column_stack([lat, lon])
