"""
Field specifications and realized samples.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import import_module
from typing import Callable, Optional, Union

import numpy as np
from numpy.typing import ArrayLike

from config import settings
from custom_types.json import JSONDict, to_json_value
from engine.enums import EnsembleKind
from engine.exceptions import DomainError
from engine.geometry.grid import LatticeGrid
from engine.geometry.sphere import FloatArray
from engine.spectral import KernelSpec, ZonalCoefficients

_special = import_module("scipy.special")
bessel_j0: Callable[[ArrayLike], FloatArray] = _special.j0
bessel_j1: Callable[[ArrayLike], FloatArray] = _special.j1

ISOTROPIC = "isotropic"


@dataclass(frozen=True)
class PlanarSpec:
    """Planar scaling-limit field: Bargmann-Fock, or the plane wave with annulus ratio ``alpha``."""

    kind: EnsembleKind
    alpha: float = 1.0
    waves: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.kind.is_planar:
            raise DomainError(f"{self.kind.value} is not a planar limit field")
        if self.kind is EnsembleKind.plane_wave and not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if self.waves is not None and self.waves < settings.planar_min_waves:
            raise DomainError(f"at least {settings.planar_min_waves} waves are required, got {self.waves}")

    @classmethod
    def bargmann_fock(cls, waves: Optional[int] = None) -> PlanarSpec:
        return cls(EnsembleKind.bargmann_fock, 1.0, waves)

    @classmethod
    def plane_wave(cls, alpha: float = 1.0, waves: Optional[int] = None) -> PlanarSpec:
        return cls(EnsembleKind.plane_wave, alpha, waves)

    @property
    def wave_count(self) -> int:
        return self.waves if self.waves is not None else settings.planar_waves

    def kernel(self, d: ArrayLike) -> FloatArray:
        r = np.abs(np.asarray(d, dtype=float))
        if self.kind is EnsembleKind.bargmann_fock:
            return np.exp(-0.5 * r * r)
        if self.alpha >= 1.0:
            return bessel_j0(r)
        a = self.alpha
        safe = np.where(r > 0.0, r, 1.0)
        val = 2.0 / (1.0 - a * a) * (bessel_j1(safe) - a * bessel_j1(a * safe)) / safe
        return np.where(r > 0.0, val, 1.0)

    def label(self) -> str:
        if self.kind is EnsembleKind.bargmann_fock:
            return "bargmann_fock"
        return f"plane_wave(alpha={self.alpha:g})"


FieldSpec = Union[KernelSpec, PlanarSpec, ZonalCoefficients]


def spec_label(spec: FieldSpec) -> str:
    if isinstance(spec, ZonalCoefficients):
        return f"{ISOTROPIC}(lmax={spec.lmax})"
    return spec.label()


def spec_scale(spec: FieldSpec) -> float:
    """Local scale of the ensemble: 1/sqrt(n) for Kostlan, 1/degree otherwise, 1 for planar fields."""
    if isinstance(spec, KernelSpec):
        return spec.local_scale
    if isinstance(spec, ZonalCoefficients):
        return 1.0 / max(spec.lmax, 1)
    return 1.0


def spec_document(spec: FieldSpec) -> JSONDict:
    if isinstance(spec, KernelSpec):
        return {"ensemble": spec.kind.value, "degree": spec.degree, "alpha": spec.alpha, "beta": spec.beta}
    if isinstance(spec, PlanarSpec):
        return {"ensemble": spec.kind.value, "alpha": spec.alpha, "waves": spec.wave_count}
    return {"ensemble": ISOTROPIC, "coefficients": to_json_value(spec.c)}


def spec_from_document(doc: JSONDict) -> FieldSpec:
    name = doc.get("ensemble")
    try:
        if name == ISOTROPIC:
            return ZonalCoefficients(np.asarray(doc["coefficients"], dtype=float))
        kind = EnsembleKind(str(name))
        if kind.is_planar:
            waves = doc.get("waves")
            return PlanarSpec(kind, float(doc.get("alpha", 1.0)), int(waves) if waves is not None else None)  # type: ignore[arg-type]
        return KernelSpec(kind, int(doc["degree"]), float(doc.get("alpha", 0.0)), float(doc.get("beta", 0.5)))  # type: ignore[arg-type]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed field spec {doc!r}: {exc}") from exc


@dataclass(frozen=True, eq=False)
class FieldSample:
    grid: LatticeGrid
    values: FloatArray
    coeffs: FloatArray
    spec: FieldSpec
    seed: int
    replicate: int = 0

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=float).ravel()
        if values.size != self.grid.size:
            raise DomainError(f"sample has {values.size} values for a grid of {self.grid.size} cells")
        if not np.all(np.isfinite(values)):
            raise DomainError("sample values must be finite")
        coeffs = np.ascontiguousarray(self.coeffs, dtype=float).ravel()
        values.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def grid_ref(self) -> str:
        return self.grid.identity

    @property
    def label(self) -> str:
        return spec_label(self.spec)

    @property
    def local_scale(self) -> float:
        return spec_scale(self.spec)

    def with_values(self, values: FloatArray) -> FieldSample:
        return FieldSample(self.grid, values, self.coeffs, self.spec, self.seed, self.replicate)

    def negated(self) -> FieldSample:
        return self.with_values(-self.values)

