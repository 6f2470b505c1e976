"""
Finite-range truncation of a general isotropic field through its zonal function.

q(theta) = sum c_l sqrt(N_l) P_l(cos theta) is cut off by 1 - phi_r, re-expanded in
Legendre polynomials, and the field is rebuilt from the same harmonic coefficients.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from config import FOUR_PI, settings
from engine.exceptions import DomainError, QuadratureError
from engine.fields.harmonics import coefficient_count
from engine.fields.models import FieldSample
from engine.fields.spherical import draw_coefficients, isotropic_values
from engine.finite_range.bump import cutoff
from engine.finite_range.models import CoupledPair, ZonalTruncation
from engine.geometry.grid import LatticeGrid
from engine.geometry.sphere import FloatArray
from engine.spectral import ZonalCoefficients
from engine.spectral.kernels import roots_legendre

log = logging.getLogger(__name__)

RESIDUAL_POINTS = 200
_MIN_DEGREE = 64


def _node_count(degree: int) -> int:
    return settings.zonal_quadrature_factor * degree + settings.zonal_quadrature_offset


def _legendre_moments(values: FloatArray, x: FloatArray, degree: int) -> FloatArray:
    """sum_k values_k P_l(x_k) for l = 0..degree."""
    out = np.empty(degree + 1)
    p_prev = np.ones_like(x)
    out[0] = float(np.sum(values))
    if degree == 0:
        return out
    p = x.copy()
    out[1] = float(values @ p)
    for k in range(1, degree):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
        out[k + 1] = float(values @ p)
    return out


def _project(coeffs: ZonalCoefficients, r: float, degree: int, nodes: int) -> FloatArray:
    """Coefficients c~ of q (1 - phi_r), integrating piecewise so each piece is smooth."""
    lo, mid = math.cos(r / 2.0), math.cos(r / 4.0)
    t, w = roots_legendre(nodes)
    moments = np.zeros(degree + 1)
    for a, b in ((lo, mid), (mid, 1.0)):
        if b <= a:
            continue
        x = 0.5 * (b - a) * t + 0.5 * (b + a)
        theta = np.arccos(np.clip(x, -1.0, 1.0))
        integrand = coeffs.zonal_values(theta) * cutoff(theta, r) * (0.5 * (b - a) * w)
        moments += _legendre_moments(integrand, x, degree)
    ell = np.arange(degree + 1, dtype=float)
    g = (2.0 * ell + 1.0) / 2.0 * moments
    return g / np.sqrt((2.0 * ell + 1.0) / FOUR_PI)


def _round_trip_gap(c_tilde: FloatArray, nodes: int, points: int = RESIDUAL_POINTS) -> float:
    """Synthesize c~ at the Gauss nodes, project it back with the same rule and return
    the sup over an even theta grid of the change in the zonal function."""
    degree = c_tilde.size - 1
    t, w = roots_legendre(nodes)
    values = ZonalCoefficients(c_tilde).zonal_values(np.arccos(np.clip(t, -1.0, 1.0)))
    ell = np.arange(degree + 1, dtype=float)
    g = (2.0 * ell + 1.0) / 2.0 * _legendre_moments(values * w, t, degree)
    back = g / np.sqrt((2.0 * ell + 1.0) / FOUR_PI)
    theta = math.pi * np.arange(points + 1) / points
    return float(np.max(np.abs(ZonalCoefficients(back - c_tilde).zonal_values(theta))))


def _resynthesis_gap(first: FloatArray, second: FloatArray) -> float:
    """Sup-norm bound on the difference of the two re-synthesized zonal functions."""
    ell = np.arange(first.size, dtype=float)
    return float(np.sum(np.abs(first - second) * np.sqrt((2.0 * ell + 1.0) / FOUR_PI)))


def residual_kernel(coeffs: ZonalCoefficients, r: float, points: int = RESIDUAL_POINTS) -> float:
    """max |K(theta)| over an even grid of (r, pi]."""
    theta = r + (math.pi - r) * np.arange(1, points + 1) / points
    return float(np.max(np.abs(coeffs.kernel_values(theta))))


def truncate_zonal(
    coeffs: ZonalCoefficients,
    r: float,
    tol: Optional[float] = None,
    max_degree: Optional[int] = None,
) -> ZonalTruncation:
    """Re-expand q (1 - phi_r), raising the truncation degree until the kernel vanishes beyond r."""
    if tol is None:
        tol = settings.zonal_support_tol
    if max_degree is None:
        max_degree = settings.zonal_max_degree
    if not 0.0 < r <= math.pi / 2.0 + 1e-12:
        raise DomainError(f"range must lie in (0, pi/2], got {r!r}")
    if not math.isfinite(coeffs.smoothness):
        raise DomainError("zonal coefficients must have finite smoothness")
    degree = min(max(2 * coeffs.lmax, _MIN_DEGREE), max_degree)
    while True:
        nodes = _node_count(degree)
        c_tilde = _project(coeffs, r, degree, nodes)
        check = _project(coeffs, r, degree, nodes + nodes // 2)
        gap = _resynthesis_gap(c_tilde, check)
        if gap > tol:
            raise QuadratureError(f"zonal re-expansion at degree {degree} changes by {gap:.3e} with more nodes")
        trip = _round_trip_gap(c_tilde, nodes)
        if trip > tol:
            raise QuadratureError(
                f"re-synthesizing the degree {degree} expansion on {nodes} nodes misses it by {trip:.3e}"
            )
        gap = max(gap, trip)
        truncated = ZonalCoefficients(c_tilde)
        residual = residual_kernel(truncated, r)
        log.debug("zonal truncation r=%.4g degree=%d residual=%.3e", r, degree, residual)
        if residual < tol:
            return ZonalTruncation(coeffs, truncated, r, nodes, residual, gap)
        if degree >= max_degree:
            raise QuadratureError(
                f"truncated kernel still reaches {residual:.3e} beyond r={r:g} at degree {degree}"
            )
        degree = min(2 * degree, max_degree)


def zonal_truncated_pair(
    coeffs: ZonalCoefficients,
    r: float,
    grid: LatticeGrid,
    seed: int,
    replicate: int = 0,
    truncation: Optional[ZonalTruncation] = None,
    harmonic: Optional[FloatArray] = None,
) -> CoupledPair:
    """Isotropic field and its r-range dependent truncation sharing the harmonic coefficients."""
    if not grid.spherical:
        raise DomainError("zonal truncation needs a spherical grid")
    if truncation is None:
        truncation = truncate_zonal(coeffs, r)
    elif truncation.range != r:
        raise DomainError(f"truncation was built for r={truncation.range:g}, not {r:g}")
    lmax = max(coeffs.lmax, truncation.degree)
    count = coefficient_count(lmax)
    a = draw_coefficients(count, seed, replicate) if harmonic is None else np.asarray(harmonic, dtype=float).ravel()
    if a.size < count:
        raise DomainError(f"need {count} harmonic coefficients, got {a.size}")
    full = isotropic_values(coeffs.c, a, grid)
    truncated = isotropic_values(truncation.truncated.c, a, grid)
    variance = np.full(grid.size, truncation.variance_gap)
    return CoupledPair(
        full=FieldSample(grid, full, a[: coefficient_count(coeffs.lmax)], coeffs, seed, replicate),
        truncated=FieldSample(grid, truncated, a[:count], truncation.truncated, seed, replicate),
        range=r,
        shared_seed=seed,
        analytic_variance=variance,
    )
