"""
Finite-range coupling of the Kostlan ensemble on a compact part of the positive orthant.

Each basis function b_J is cut off outside the cap of radius r/2 about its localization
point v_J = (sqrt(j1/n), sqrt(j2/n), sqrt(j3/n)); the truncated field is therefore exactly
r-range dependent.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config import settings
from engine.exceptions import BudgetError, DomainError, OrthantViolationError, PositivityError
from engine.fields.models import FieldSample
from engine.fields.rng import Stream, replicate_rng
from engine.fields.spherical import (
    draw_coefficients,
    kostlan_basis_chunks,
    kostlan_multi_indices,
    kostlan_size,
)
from engine.finite_range.bump import cutoff, scaled_bump
from engine.finite_range.models import CoupledPair, LocalizationReport, SupportAudit
from engine.geometry.grid import LatticeGrid
from engine.geometry.sphere import FloatArray
from engine.spectral import KernelSpec

log = logging.getLogger(__name__)

LOCALIZATION_MAX_DEGREE = 256
_DECAY_BINS = 12
_LOG_FLOOR = 1e-280


@lru_cache(maxsize=32)
def localization_points(n: int) -> FloatArray:
    """Unit vectors v_J in the order of ``kostlan_multi_indices(n)``."""
    out = np.sqrt(kostlan_multi_indices(n).astype(float) / n)
    out.setflags(write=False)
    return out


def _angles(points: FloatArray, centers: FloatArray) -> FloatArray:
    return np.arccos(np.clip(points @ centers.T, -1.0, 1.0))


def check_orthant(points: ArrayLike, margin: Optional[float] = None) -> FloatArray:
    if margin is None:
        margin = settings.orthant_margin
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    low = np.min(pts, axis=1)
    bad = np.flatnonzero(low < margin)
    if bad.size:
        i = int(bad[0])
        raise OrthantViolationError(
            f"{bad.size} cells leave the orthant region (margin {margin:g}); first is cell {i} at {pts[i].tolist()}"
        )
    return pts


def _check_range(n: int, r: float) -> None:
    if not math.isfinite(r) or r <= 0.0:
        raise DomainError(f"range must be positive, got {r!r}")
    if r < 1.0 / math.sqrt(n) - 1e-12:
        raise DomainError(f"range {r:g} is below the Kostlan scale 1/sqrt({n})")


def truncation_mask(n: int, r: float, points: ArrayLike) -> NDArray[np.bool_]:
    """Basis indices whose cutoff differs from 1 somewhere on ``points``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    v = localization_points(n)
    return np.any(_angles(pts, v) > r / 4.0, axis=0)


def kostlan_coupled(
    n: int,
    r: float,
    grid: LatticeGrid,
    seed: int,
    replicate: int = 0,
    coeffs: Optional[FloatArray] = None,
    margin: Optional[float] = None,
) -> CoupledPair:
    if not grid.spherical:
        raise DomainError("Kostlan coupling needs a spherical grid")
    _check_range(n, r)
    pts = check_orthant(grid.positions, margin)
    a = draw_coefficients(kostlan_size(n), seed, replicate) if coeffs is None else np.asarray(coeffs, dtype=float)
    if a.size != kostlan_size(n):
        raise DomainError(f"Kostlan degree {n} needs {kostlan_size(n)} coefficients, got {a.size}")
    v = localization_points(n)
    full = np.empty(pts.shape[0])
    truncated = np.empty(pts.shape[0])
    variance = np.empty(pts.shape[0])
    for rows, basis in kostlan_basis_chunks(n, pts):
        dist = _angles(pts[rows], v)
        kept = basis * cutoff(dist, r)
        full[rows] = basis @ a
        truncated[rows] = kept @ a
        variance[rows] = np.sum((basis * scaled_bump(dist, r)) ** 2, axis=1)
    spec = KernelSpec.kostlan(n)
    log.debug("kostlan coupling n=%d r=%.4g on %d cells", n, r, pts.shape[0])
    return CoupledPair(
        full=FieldSample(grid, full, a, spec, seed, replicate),
        truncated=FieldSample(grid, truncated, a, spec, seed, replicate),
        range=r,
        shared_seed=seed,
        analytic_variance=variance,
    )


def kostlan_coupling_variance(n: int, r: float, points: ArrayLike) -> FloatArray:
    """Pointwise Var(f - f^(r)) = sum_J b_J(x)^2 phi_r(d(x, v_J))^2."""
    _check_range(n, r)
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    v = localization_points(n)
    out = np.empty(pts.shape[0])
    for rows, basis in kostlan_basis_chunks(n, pts):
        out[rows] = np.sum((basis * scaled_bump(_angles(pts[rows], v), r)) ** 2, axis=1)
    return out


def support_audit(n: int, r: float, points: ArrayLike) -> SupportAudit:
    """Check from support lists that no truncated basis function reaches two points r apart."""
    _check_range(n, r)
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    v = localization_points(n)
    worst = 0.0
    active = 0
    witness: Optional[Tuple[int, int, int]] = None
    for j in range(v.shape[0]):
        support = np.flatnonzero(cutoff(_angles(pts, v[j : j + 1])[:, 0], r) > 0.0)
        if support.size == 0:
            continue
        active += 1
        if support.size == 1:
            continue
        sub = pts[support]
        gram = np.clip(sub @ sub.T, -1.0, 1.0)
        k = int(np.argmin(gram))
        far = float(np.arccos(gram.flat[k]))
        if far > worst:
            worst = far
        if far >= r and witness is None:
            a, b = divmod(k, support.size)
            witness = (j, int(support[a]), int(support[b]))
    audit = SupportAudit(n, r, v.shape[0], active, worst, witness)
    log.debug("support audit n=%d r=%.4g: %d active, widest %.4g", n, r, active, worst)
    return audit


def orthant_samples(count: int, margin: float, seed: int) -> FloatArray:
    """Uniform points on the sphere with every coordinate at least ``margin``."""
    rng = replicate_rng(seed, 0, Stream.checks)
    out: List[FloatArray] = []
    have = 0
    while have < count:
        draw = np.abs(rng.standard_normal((2 * count, 3)))
        draw /= np.linalg.norm(draw, axis=1)[:, None]
        keep = draw[np.min(draw, axis=1) >= margin]
        out.append(keep)
        have += keep.shape[0]
    return np.concatenate(out)[:count]


def basis_localization_report(
    n: int,
    margin: Optional[float] = None,
    samples: int = 200,
    seed: int = 0,
    near_radius: float = 0.3,
) -> LocalizationReport:
    if n > LOCALIZATION_MAX_DEGREE:
        raise BudgetError(f"localization report enumerates all basis functions; degree {n} > {LOCALIZATION_MAX_DEGREE}")
    if margin is None:
        margin = settings.orthant_margin
    pts = orthant_samples(samples, margin, seed)
    v = localization_points(n)
    values = np.concatenate([basis for _, basis in kostlan_basis_chunks(n, pts)])
    dist = _angles(pts, v)
    low = float(np.min(values))
    if low < 0.0:
        i, j = np.unravel_index(int(np.argmin(values)), values.shape)
        raise PositivityError(f"basis function {int(j)} is negative ({low:.3e}) at sample {int(i)}")

    usable = values > _LOG_FLOOR
    y = np.log(values[usable]) + 0.5 * math.log(n)
    design = np.column_stack([np.ones(y.size), -n * dist[usable] ** 2])
    (log_c, rate), *_ = np.linalg.lstsq(design, y, rcond=None)

    edges = np.linspace(0.0, float(np.max(dist)), _DECAY_BINS + 1)
    which = np.clip(np.digitize(dist.ravel(), edges) - 1, 0, _DECAY_BINS - 1)
    maxima = np.zeros(_DECAY_BINS)
    np.maximum.at(maxima, which, values.ravel())
    filled = maxima[maxima > 0.0]
    monotone = bool(np.all(np.diff(filled) <= 0.0))

    near = int(np.sum(dist[0] < near_radius))
    report = LocalizationReport(
        degree=n,
        margin=margin,
        samples=samples,
        min_value=low,
        fitted_constant=float(math.exp(log_c)),
        fitted_rate=float(rate),
        bin_edges=edges.tolist(),
        bin_maxima=maxima.tolist(),
        monotone=monotone,
        near_count=near,
        near_radius=near_radius,
    )
    log.info("localization n=%d: C=%.3g c=%.3g monotone=%s", n, report.fitted_constant, report.fitted_rate, monotone)
    return report
