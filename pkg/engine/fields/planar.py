"""
Planar scaling-limit fields sampled as random-wave superpositions
h(x) = sqrt(2/K) sum_k cos(<xi_k, x> + phi_k) with xi_k drawn from the spectral measure.

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
from numpy.typing import ArrayLike

from config import settings
from engine.enums import EnsembleKind
from engine.exceptions import DomainError
from engine.fields.models import FieldSample, PlanarSpec
from engine.fields.rng import Stream, replicate_rng
from engine.geometry.grid import LatticeGrid
from engine.geometry.sphere import FloatArray

log = logging.getLogger(__name__)

_POINT_CHUNK = 4096


@dataclass(frozen=True, eq=False)
class WaveSuperposition:
    frequencies: FloatArray
    phases: FloatArray

    def __post_init__(self) -> None:
        freq = np.asarray(self.frequencies, dtype=float).reshape(-1, 2)
        phases = np.asarray(self.phases, dtype=float).ravel()
        if freq.shape[0] < 1 or freq.shape[0] != phases.size:
            raise DomainError("a wave superposition needs matching frequencies and phases, at least one wave")
        object.__setattr__(self, "frequencies", freq)
        object.__setattr__(self, "phases", phases)

    @property
    def K(self) -> int:
        return int(self.phases.size)

    @classmethod
    def draw(cls, spec: PlanarSpec, rng: np.random.Generator, waves: Optional[int] = None) -> WaveSuperposition:
        k = spec.wave_count if waves is None else waves
        if k < settings.planar_min_waves:
            raise DomainError(f"at least {settings.planar_min_waves} waves are required, got {k}")
        if spec.kind is EnsembleKind.bargmann_fock:
            freq = rng.standard_normal((k, 2))
        else:
            a = spec.alpha
            radius = np.ones(k) if a >= 1.0 else np.sqrt(rng.uniform(a * a, 1.0, k))
            angle = rng.uniform(0.0, 2.0 * math.pi, k)
            freq = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
        phases = rng.uniform(0.0, 2.0 * math.pi, k)
        return cls(freq, phases)

    def evaluate(self, points: ArrayLike) -> FloatArray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        out = np.empty(pts.shape[0])
        scale = math.sqrt(2.0 / self.K)
        for start in range(0, pts.shape[0], _POINT_CHUNK):
            block = pts[start : start + _POINT_CHUNK]
            out[start : start + block.shape[0]] = scale * np.cos(block @ self.frequencies.T + self.phases).sum(axis=1)
        return out

    def packed(self) -> FloatArray:
        """Frequencies then phases, the coefficient vector carried by samples."""
        return np.concatenate([self.frequencies.ravel(), self.phases])

    @classmethod
    def unpack(cls, coeffs: ArrayLike) -> WaveSuperposition:
        arr = np.asarray(coeffs, dtype=float).ravel()
        if arr.size % 3:
            raise DomainError("packed wave coefficients must hold 3 numbers per wave")
        k = arr.size // 3
        return cls(arr[: 2 * k].reshape(k, 2), arr[2 * k :])


def sample_planar(
    spec: PlanarSpec,
    grid: LatticeGrid,
    seed: int,
    replicate: int = 0,
    waves: Optional[WaveSuperposition] = None,
) -> FieldSample:
    if grid.spherical:
        raise DomainError("planar limit fields need a planar grid")
    sup = waves if waves is not None else WaveSuperposition.draw(spec, replicate_rng(seed, replicate, Stream.waves))
    values = sup.evaluate(grid.positions)
    return FieldSample(grid, values, sup.packed(), spec, seed, replicate)
