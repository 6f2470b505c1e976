"""
Real spherical harmonic synthesis from fully normalized associated Legendre functions,
evaluated once per latitude row and combined with cos/sin tables across the row.

Coefficient layout is degree-major: for each degree l' the block
``[a(l',0), a_c(l',1), a_s(l',1), ..., a_c(l',l'), a_s(l',l')]`` of length 2l'+1,
so the first (L+1)^2 entries of any longer vector describe degrees 0..L.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import math
from importlib import import_module
from typing import Callable, Iterator, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from config import FOUR_PI, settings
from engine.exceptions import BudgetError, DomainError
from engine.geometry.sphere import FloatArray

gammaln: Callable[[ArrayLike], FloatArray] = import_module("scipy.special").gammaln

_SQRT2 = math.sqrt(2.0)


def coefficient_count(lmax: int) -> int:
    return (lmax + 1) ** 2


def block_offset(ell: int) -> int:
    return ell * ell


def iter_normalized_legendre(lmax: int, x: ArrayLike) -> Iterator[Tuple[int, FloatArray]]:
    """Yield ``(l, lam)`` for l = 0..lmax with ``lam[m] = N_lm P_l^m(x)``, m = 0..l.

    ``N_lm`` makes ``sqrt(2) lam[m] cos(m phi)`` orthonormal on the sphere; the
    Condon-Shortley phase is dropped.
    """
    xs = np.asarray(x, dtype=float).ravel()
    if np.any(np.abs(xs) > 1.0 + settings.legendre_domain_tol):
        raise DomainError("Legendre argument outside [-1, 1]")
    xs = np.clip(xs, -1.0, 1.0)
    s = np.sqrt(np.clip(1.0 - xs * xs, 0.0, None))
    rows = xs.size
    diag = np.full(rows, math.sqrt(1.0 / FOUR_PI))
    prev2 = np.zeros((0, rows))
    prev1 = np.zeros((0, rows))
    for ell in range(lmax + 1):
        cur = np.empty((ell + 1, rows))
        if ell > 0:
            m = np.arange(ell, dtype=float)
            a = np.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
            cur[:ell] = a[:, None] * xs * prev1
            if ell > 1:
                k = m[: ell - 1]
                b = np.sqrt(((ell - 1.0) ** 2 - k * k) / (4.0 * (ell - 1.0) ** 2 - 1.0))
                cur[: ell - 1] -= (a[: ell - 1] * b)[:, None] * prev2
            diag = diag * math.sqrt((2.0 * ell + 1.0) / (2.0 * ell)) * s
        cur[ell] = diag
        yield ell, cur
        prev2, prev1 = prev1, cur


def normalized_legendre(ell: int, x: ArrayLike) -> FloatArray:
    """``N_lm P_l^m(x)`` for m = 0..l, shape ``(l + 1, len(x))``."""
    if ell < 0:
        raise DomainError(f"degree must be nonnegative, got {ell}")
    out: Optional[FloatArray] = None
    for degree, lam in iter_normalized_legendre(ell, x):
        if degree == ell:
            out = lam
    assert out is not None
    return out


def associated_legendre(ell: int, x: ArrayLike) -> FloatArray:
    """Unnormalized ``P_l^m(x)`` for m = 0..l (no Condon-Shortley phase)."""
    if ell > settings.rsh_unnormalized_max_degree:
        raise BudgetError(
            f"unnormalized Legendre functions overflow above degree {settings.rsh_unnormalized_max_degree}"
        )
    lam = normalized_legendre(ell, x)
    m = np.arange(ell + 1, dtype=float)
    log_norm = 0.5 * (math.log((2.0 * ell + 1.0) / FOUR_PI) + gammaln(ell - m + 1.0) - gammaln(ell + m + 1.0))
    return lam * np.exp(-log_norm)[:, None]


def real_harmonics(ell: int, colat: ArrayLike, lon: ArrayLike) -> FloatArray:
    """Real orthonormal Y_lm at points, rows ordered as one coefficient block."""
    th = np.asarray(colat, dtype=float).ravel()
    ph = np.asarray(lon, dtype=float).ravel()
    lam = normalized_legendre(ell, np.cos(th))
    out = np.empty((2 * ell + 1, th.size))
    out[0] = lam[0]
    for m in range(1, ell + 1):
        out[2 * m - 1] = _SQRT2 * lam[m] * np.cos(m * ph)
        out[2 * m] = _SQRT2 * lam[m] * np.sin(m * ph)
    return out


def _row_sums(weights: FloatArray, coeffs: FloatArray, x: FloatArray) -> Tuple[FloatArray, FloatArray]:
    """Per-row cos and sin amplitudes ``A[m, r]``, ``B[m, r]`` of sum_l w_l T_l."""
    lmax = weights.size - 1
    if coeffs.size < coefficient_count(lmax):
        raise DomainError(f"need {coefficient_count(lmax)} coefficients for degree {lmax}, got {coeffs.size}")
    amp_c = np.zeros((lmax + 1, x.size))
    amp_s = np.zeros((lmax + 1, x.size))
    for ell, lam in iter_normalized_legendre(lmax, x):
        w = weights[ell]
        if w == 0.0:
            continue
        block = coeffs[block_offset(ell) : block_offset(ell + 1)]
        scale = w * math.sqrt(FOUR_PI / (2.0 * ell + 1.0))
        amp_c[0] += scale * block[0] * lam[0]
        if ell > 0:
            amp_c[1 : ell + 1] += scale * _SQRT2 * block[1::2][:, None] * lam[1:]
            amp_s[1 : ell + 1] += scale * _SQRT2 * block[2::2][:, None] * lam[1:]
    return amp_c, amp_s


def synthesize_rows(weights: ArrayLike, coeffs: ArrayLike, colat: ArrayLike, lon: ArrayLike) -> FloatArray:
    """Field ``sum_l w_l T_l`` on the product grid of row colatitudes and column longitudes."""
    w = np.asarray(weights, dtype=float).ravel()
    a = np.asarray(coeffs, dtype=float).ravel()
    th = np.asarray(colat, dtype=float).ravel()
    ph = np.asarray(lon, dtype=float).ravel()
    amp_c, amp_s = _row_sums(w, a, np.cos(th))
    m = np.arange(w.size, dtype=float)
    angles = np.outer(m, ph)
    return amp_c.T @ np.cos(angles) + amp_s.T @ np.sin(angles)


def synthesize_points(weights: ArrayLike, coeffs: ArrayLike, colat: ArrayLike, lon: ArrayLike) -> FloatArray:
    """Same field at scattered points (each point is its own row)."""
    w = np.asarray(weights, dtype=float).ravel()
    a = np.asarray(coeffs, dtype=float).ravel()
    th = np.asarray(colat, dtype=float).ravel()
    ph = np.asarray(lon, dtype=float).ravel()
    amp_c, amp_s = _row_sums(w, a, np.cos(th))
    m = np.arange(w.size, dtype=float)
    angles = np.outer(m, ph)
    return np.sum(amp_c * np.cos(angles) + amp_s * np.sin(angles), axis=0)
