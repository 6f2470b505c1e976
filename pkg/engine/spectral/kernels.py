"""
Covariance kernels of the spherical ensembles and their zonal coefficient vectors.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from importlib import import_module
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike

from config import FOUR_PI, settings
from engine.enums import EnsembleKind
from engine.exceptions import BudgetError, ConsistencyError, DomainError
from engine.spectral.polynomials import FloatArray, checked_argument, jacobi_p10_values, legendre_values

log = logging.getLogger(__name__)

roots_legendre: Callable[[int], tuple[FloatArray, FloatArray]] = import_module("scipy.special").roots_legendre

_FLOOR_GUARD = 1e-9


def _floor(x: float) -> int:
    return int(math.floor(x + _FLOOR_GUARD))


@dataclass(frozen=True)
class KernelSpec:
    kind: EnsembleKind
    degree: int
    alpha: float = 0.0
    beta: float = 0.5

    def __post_init__(self) -> None:
        if not self.kind.is_spherical:
            raise DomainError(f"{self.kind.value} is not a spherical ensemble")
        if int(self.degree) != self.degree or self.degree < 0:
            raise DomainError(f"degree must be a nonnegative integer, got {self.degree!r}")
        if self.kind is EnsembleKind.kostlan and self.degree < 1:
            raise DomainError("Kostlan degree must be at least 1")
        if self.kind is EnsembleKind.bandlimited and not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if self.kind is EnsembleKind.mono and not 0.0 < self.beta < 1.0:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta!r}")

    @classmethod
    def kostlan(cls, n: int) -> KernelSpec:
        return cls(EnsembleKind.kostlan, n)

    @classmethod
    def legendre(cls, ell: int) -> KernelSpec:
        return cls(EnsembleKind.rsh, ell)

    @classmethod
    def bandlimited(cls, alpha: float, ell: int) -> KernelSpec:
        return cls(EnsembleKind.bandlimited, ell, alpha=alpha)

    @classmethod
    def mono(cls, beta: float, ell: int) -> KernelSpec:
        return cls(EnsembleKind.mono, ell, beta=beta)

    @property
    def window(self) -> tuple[int, int]:
        """Inclusive degree range carrying the spectral mass."""
        ell = self.degree
        if self.kind is EnsembleKind.kostlan:
            return ell % 2, ell
        if self.kind is EnsembleKind.rsh:
            return ell, ell
        if self.kind is EnsembleKind.bandlimited:
            return min(_floor(self.alpha * ell), ell), ell
        return ell - min(_floor(ell**self.beta), ell), ell

    @property
    def window_width(self) -> int:
        lo, hi = self.window
        return hi - lo + 1

    @property
    def window_exponent(self) -> float:
        if self.kind is EnsembleKind.bandlimited and self.alpha < 1.0:
            return 1.0
        return self.beta

    @property
    def normalizing_constant_sq(self) -> float:
        lo, hi = self.window
        return FOUR_PI / ((hi + 1) ** 2 - lo**2)

    @property
    def local_scale(self) -> float:
        if self.kind is EnsembleKind.kostlan:
            return 1.0 / math.sqrt(self.degree)
        return 1.0 / max(self.degree, 1)

    def label(self) -> str:
        if self.kind is EnsembleKind.kostlan:
            return f"kostlan(n={self.degree})"
        if self.kind is EnsembleKind.rsh:
            return f"rsh(ell={self.degree})"
        if self.kind is EnsembleKind.bandlimited:
            return f"bandlimited(alpha={self.alpha:g}, ell={self.degree})"
        return f"mono(beta={self.beta:g}, ell={self.degree})"


def checked_angles(thetas: ArrayLike) -> FloatArray:
    th = np.asarray(thetas, dtype=float)
    if not np.all(np.isfinite(th)):
        raise DomainError("angles must be finite")
    tol = settings.legendre_domain_tol
    if th.size and (float(np.min(th)) < -tol or float(np.max(th)) > math.pi + tol):
        raise DomainError("angles must lie in [0, pi]")
    return np.clip(th, 0.0, math.pi)


def _neumaier_add(total: FloatArray, comp: FloatArray, term: FloatArray) -> FloatArray:
    t = total + term
    comp += np.where(np.abs(total) >= np.abs(term), (total - t) + term, (term - t) + total)
    return t


def compensated_sum(terms: ArrayLike) -> FloatArray:
    """Neumaier summation along the first axis."""
    arr = np.asarray(terms, dtype=float)
    total = np.zeros(arr.shape[1:], dtype=float)
    comp = np.zeros_like(total)
    for term in arr:
        total = _neumaier_add(total, comp, term)
    return total + comp


def kostlan_kernel_values(n: int, thetas: ArrayLike) -> FloatArray:
    if int(n) != n or n < 1:
        raise DomainError(f"Kostlan degree must be a positive integer, got {n!r}")
    th = checked_angles(thetas)
    c = np.sin(math.pi / 2.0 - th)
    out = np.zeros_like(c)
    nz = c != 0.0
    mag = np.exp(n * np.log(np.abs(c[nz])))
    sign = np.where(c[nz] < 0.0, -1.0 if n % 2 else 1.0, 1.0)
    out[nz] = sign * mag
    return out


def kostlan_kernel(n: int, theta: float) -> float:
    return float(kostlan_kernel_values(n, theta))


def window_legendre_sum(spec: KernelSpec, x: FloatArray) -> FloatArray:
    """Compensated direct sum of N_l' P_l'(x) over the spectral window."""
    lo, hi = spec.window
    total = np.zeros_like(x)
    comp = np.zeros_like(x)
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(hi + 1):
        if k == 0:
            current = p_prev
        elif k == 1:
            current = p
        else:
            p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
            current = p
        if k >= lo:
            total = _neumaier_add(total, comp, (2 * k + 1) / FOUR_PI * current)
    return total + comp


def christoffel_darboux_sum(spec: KernelSpec, x: FloatArray) -> FloatArray:
    lo, hi = spec.window
    value = (hi + 1) / FOUR_PI * jacobi_p10_values(hi, x)
    if lo >= 1:
        value = value - lo / FOUR_PI * jacobi_p10_values(lo - 1, x)
    return value


def bandlimited_kernel_values(spec: KernelSpec, thetas: ArrayLike, rtol: Optional[float] = None) -> FloatArray:
    if spec.kind not in (EnsembleKind.bandlimited, EnsembleKind.mono):
        raise DomainError(f"band-limited kernel needs a bandlimited or mono spec, got {spec.kind.value}")
    if rtol is None:
        rtol = settings.kernel_rtol
    th = checked_angles(thetas)
    x = checked_argument(np.cos(th))
    c2 = spec.normalizing_constant_sq
    direct = c2 * window_legendre_sum(spec, x)
    closed = c2 * christoffel_darboux_sum(spec, x)
    gap = np.abs(direct - closed)
    allowed = rtol * np.maximum(1.0, np.abs(direct))
    if np.any(gap > allowed):
        worst = int(np.argmax(gap - allowed))
        raise ConsistencyError(
            f"{spec.label()}: direct and Christoffel-Darboux forms differ by {float(gap.flat[worst]):.3e} "
            f"at theta={float(th.flat[worst]):.6g}"
        )
    return closed


def bandlimited_kernel(spec: KernelSpec, theta: float) -> float:
    return float(bandlimited_kernel_values(spec, theta))


def kernel_values(spec: KernelSpec, thetas: ArrayLike) -> FloatArray:
    if spec.kind is EnsembleKind.kostlan:
        return kostlan_kernel_values(spec.degree, thetas)
    if spec.kind is EnsembleKind.rsh:
        return legendre_values(spec.degree, np.cos(checked_angles(thetas)))
    return bandlimited_kernel_values(spec, thetas)


@dataclass(frozen=True, eq=False)
class ZonalCoefficients:
    """Coefficients c_l' of an isotropic field, K(theta) = sum c_l'^2 P_l'(cos theta)."""

    c: FloatArray

    def __post_init__(self) -> None:
        arr = np.asarray(self.c, dtype=float).ravel()
        if arr.size == 0:
            raise DomainError("zonal coefficients must have at least one entry")
        if not np.all(np.isfinite(arr)):
            raise DomainError("zonal coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)

    @property
    def lmax(self) -> int:
        return int(self.c.size - 1)

    @property
    def variance(self) -> float:
        return float(np.sum(self.c**2))

    @property
    def smoothness(self) -> float:
        degrees = np.arange(self.c.size, dtype=float)
        return float(np.sum(self.c**2 * degrees**2))

    def kernel_values(self, thetas: ArrayLike) -> FloatArray:
        return _legendre_series(self.c**2, np.cos(checked_angles(thetas)))

    def zonal_values(self, thetas: ArrayLike) -> FloatArray:
        """q(theta) = sum c_l' sqrt(N_l') P_l'(cos theta)."""
        degrees = np.arange(self.c.size, dtype=float)
        weights = self.c * np.sqrt((2.0 * degrees + 1.0) / FOUR_PI)
        return _legendre_series(weights, np.cos(checked_angles(thetas)))

    @classmethod
    def single(cls, ell: int, value: float = 1.0) -> ZonalCoefficients:
        c = np.zeros(ell + 1)
        c[ell] = value
        return cls(c)


def _legendre_series(weights: FloatArray, x: FloatArray) -> FloatArray:
    xs = checked_argument(x)
    total = np.zeros_like(xs)
    comp = np.zeros_like(xs)
    p_prev = np.ones_like(xs)
    p = xs.copy()
    for k, w in enumerate(weights):
        if k == 0:
            current = p_prev
        elif k == 1:
            current = p
        else:
            p_prev, p = p, ((2 * k - 1) * xs * p - (k - 1) * p_prev) / k
            current = p
        if w != 0.0:
            total = _neumaier_add(total, comp, w * current)
    return total + comp


def _kostlan_coefficients(n: int) -> FloatArray:
    if n > settings.kostlan_max_degree:
        raise BudgetError(f"Kostlan degree {n} exceeds the configured cap {settings.kostlan_max_degree}")
    nodes, weights = roots_legendre(n + 1)
    table = np.empty((n + 1, nodes.size))
    table[0] = 1.0
    if n >= 1:
        table[1] = nodes
    for k in range(1, n):
        table[k + 1] = ((2 * k + 1) * nodes * table[k] - k * table[k - 1]) / (k + 1)
    power = nodes**n
    degrees = np.arange(n + 1, dtype=float)
    sq = (2.0 * degrees + 1.0) / 2.0 * (table @ (weights * power))
    sq[(np.arange(n + 1) % 2) != (n % 2)] = 0.0
    return np.sqrt(np.clip(sq, 0.0, None))


def kernel_coefficients(spec: KernelSpec) -> ZonalCoefficients:
    lo, hi = spec.window
    if spec.kind is EnsembleKind.rsh:
        return ZonalCoefficients.single(spec.degree)
    if spec.kind is EnsembleKind.kostlan:
        return ZonalCoefficients(_kostlan_coefficients(spec.degree))
    c = np.zeros(hi + 1)
    degrees = np.arange(lo, hi + 1, dtype=float)
    c[lo:] = math.sqrt(spec.normalizing_constant_sq) * np.sqrt((2.0 * degrees + 1.0) / FOUR_PI)
    log.debug("%s window [%d, %d] total mass %.15f", spec.label(), lo, hi, float(np.sum(c**2)))
    return ZonalCoefficients(c)
