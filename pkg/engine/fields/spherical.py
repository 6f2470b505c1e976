"""
Samplers for the spherical ensembles: Kostlan polynomials through their multinomial basis,
and random spherical harmonics, band-limited and general isotropic fields through harmonic synthesis.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Iterator, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config import settings
from engine.enums import EnsembleKind
from engine.exceptions import BudgetError, DomainError
from engine.fields.harmonics import coefficient_count, gammaln, synthesize_points, synthesize_rows
from engine.fields.models import FieldSample, FieldSpec
from engine.fields.rng import Stream, replicate_rng
from engine.geometry.grid import LatticeGrid, SphereGrid
from engine.geometry.sphere import FloatArray
from engine.spectral import KernelSpec, ZonalCoefficients, kernel_coefficients

log = logging.getLogger(__name__)


def kostlan_size(n: int) -> int:
    return (n + 1) * (n + 2) // 2


@lru_cache(maxsize=32)
def kostlan_multi_indices(n: int) -> NDArray[np.int64]:
    """All J = (j1, j2, j3) with |J| = n, j1 descending then j2 descending."""
    rows = [(j1, j2, n - j1 - j2) for j1 in range(n, -1, -1) for j2 in range(n - j1, -1, -1)]
    out = np.array(rows, dtype=np.int64).reshape(-1, 3)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def kostlan_weights(n: int) -> FloatArray:
    """sqrt of the multinomial coefficients n! / (j1! j2! j3!)."""
    idx = kostlan_multi_indices(n).astype(float)
    log_w = 0.5 * (gammaln(n + 1.0) - np.sum(gammaln(idx + 1.0), axis=1))
    out = np.exp(log_w)
    out.setflags(write=False)
    return out


def _check_kostlan_degree(n: int) -> None:
    if n < 1:
        raise DomainError(f"Kostlan degree must be at least 1, got {n}")
    if n > settings.kostlan_max_degree:
        raise BudgetError(f"Kostlan degree {n} exceeds the configured cap {settings.kostlan_max_degree}")


def kostlan_basis_chunks(n: int, points: ArrayLike) -> Iterator[Tuple[slice, FloatArray]]:
    """Yield ``(rows, B)`` with ``B[c, J] = sqrt(binom(n, J)) x_c^J`` for consecutive point chunks."""
    _check_kostlan_degree(n)
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    idx = kostlan_multi_indices(n)
    w = kostlan_weights(n)
    chunk = max(1, settings.kostlan_basis_chunk // idx.shape[0])
    powers = np.arange(n + 1, dtype=float)
    for start in range(0, pts.shape[0], chunk):
        block = pts[start : start + chunk]
        tables = [block[:, i][:, None] ** powers for i in range(3)]
        basis = w * tables[0][:, idx[:, 0]] * tables[1][:, idx[:, 1]] * tables[2][:, idx[:, 2]]
        yield slice(start, start + block.shape[0]), basis


def kostlan_field(n: int, coeffs: ArrayLike, points: ArrayLike) -> FloatArray:
    a = np.asarray(coeffs, dtype=float).ravel()
    if a.size != kostlan_size(n):
        raise DomainError(f"Kostlan degree {n} needs {kostlan_size(n)} coefficients, got {a.size}")
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    out = np.empty(pts.shape[0])
    for rows, basis in kostlan_basis_chunks(n, pts):
        out[rows] = basis @ a
    return out


def draw_coefficients(count: int, seed: int, replicate: int = 0) -> FloatArray:
    return replicate_rng(seed, replicate, Stream.coefficients).standard_normal(count)


def _require_spherical(grid: LatticeGrid) -> None:
    if not grid.spherical:
        raise DomainError("spherical ensembles need a spherical grid")


def sample_kostlan(
    n: int,
    grid: LatticeGrid,
    seed: int,
    replicate: int = 0,
    coeffs: Optional[FloatArray] = None,
) -> FieldSample:
    _require_spherical(grid)
    _check_kostlan_degree(n)
    a = draw_coefficients(kostlan_size(n), seed, replicate) if coeffs is None else np.asarray(coeffs, dtype=float)
    values = kostlan_field(n, a, grid.positions)
    return FieldSample(grid, values, a, KernelSpec.kostlan(n), seed, replicate)


def isotropic_values(weights: ArrayLike, harmonic: ArrayLike, grid: LatticeGrid) -> FloatArray:
    """Evaluate sum_l w_l T_l on any spherical grid, row-wise when the grid is iso-latitude."""
    if isinstance(grid, SphereGrid):
        return synthesize_rows(weights, harmonic, grid.row_colatitudes, grid.col_longitudes).ravel()
    pos = grid.positions
    colat = np.arccos(np.clip(pos[:, 2], -1.0, 1.0))
    lon = np.arctan2(pos[:, 1], pos[:, 0])
    return synthesize_points(weights, harmonic, colat, lon)


def sample_isotropic(
    coeffs: ZonalCoefficients,
    grid: LatticeGrid,
    seed: int,
    replicate: int = 0,
    harmonic: Optional[FloatArray] = None,
    spec: Optional[FieldSpec] = None,
) -> FieldSample:
    """Field with covariance sum c_l^2 P_l(cos theta); ``harmonic`` forces the Gaussian coefficients."""
    _require_spherical(grid)
    count = coefficient_count(coeffs.lmax)
    a = draw_coefficients(count, seed, replicate) if harmonic is None else np.asarray(harmonic, dtype=float).ravel()
    values = isotropic_values(coeffs.c, a, grid)
    return FieldSample(grid, values, a[:count], spec if spec is not None else coeffs, seed, replicate)


def sample_rsh(ell: int, grid: LatticeGrid, seed: int, replicate: int = 0) -> FieldSample:
    spec = KernelSpec.legendre(ell)
    return sample_isotropic(kernel_coefficients(spec), grid, seed, replicate, spec=spec)


def sample_bandlimited(spec: KernelSpec, grid: LatticeGrid, seed: int, replicate: int = 0) -> FieldSample:
    if spec.kind not in (EnsembleKind.bandlimited, EnsembleKind.mono):
        raise DomainError(f"{spec.kind.value} is not a band-limited ensemble")
    return sample_isotropic(kernel_coefficients(spec), grid, seed, replicate, spec=spec)


def sample_spherical(spec: KernelSpec, grid: LatticeGrid, seed: int, replicate: int = 0) -> FieldSample:
    if spec.kind is EnsembleKind.kostlan:
        return sample_kostlan(spec.degree, grid, seed, replicate)
    if spec.kind is EnsembleKind.rsh:
        return sample_rsh(spec.degree, grid, seed, replicate)
    return sample_bandlimited(spec, grid, seed, replicate)
