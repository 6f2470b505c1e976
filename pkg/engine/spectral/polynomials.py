"""
Legendre and Jacobi P^(1,0) polynomials evaluated by their three-term recurrences.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config import settings
from engine.exceptions import DomainError

FloatArray = NDArray[np.float64]


def checked_argument(x: ArrayLike, tol: Optional[float] = None) -> FloatArray:
    if tol is None:
        tol = settings.legendre_domain_tol
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("polynomial argument must be finite")
    if arr.size and float(np.max(np.abs(arr))) > 1.0 + tol:
        raise DomainError(f"polynomial argument outside [-1, 1]: max |x| = {float(np.max(np.abs(arr)))!r}")
    return np.clip(arr, -1.0, 1.0)


def _check_degree(ell: int) -> None:
    if int(ell) != ell or ell < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {ell!r}")


def legendre_values(ell: int, x: ArrayLike) -> FloatArray:
    _check_degree(ell)
    xs = checked_argument(x)
    p_prev = np.ones_like(xs)
    if ell == 0:
        return p_prev
    p = xs.copy()
    for k in range(1, ell):
        p_prev, p = p, ((2 * k + 1) * xs * p - k * p_prev) / (k + 1)
    return p


def legendre_p(ell: int, x: float) -> float:
    return float(legendre_values(ell, x))


def legendre_table(lmax: int, x: ArrayLike) -> FloatArray:
    """Rows P_0..P_lmax evaluated at every entry of ``x``; shape ``(lmax + 1, *x.shape)``."""
    _check_degree(lmax)
    xs = checked_argument(x)
    table = np.empty((lmax + 1,) + xs.shape, dtype=float)
    table[0] = 1.0
    if lmax >= 1:
        table[1] = xs
    for k in range(1, lmax):
        table[k + 1] = ((2 * k + 1) * xs * table[k] - k * table[k - 1]) / (k + 1)
    return table


def jacobi_p10_values(ell: int, x: ArrayLike) -> FloatArray:
    _check_degree(ell)
    xs = checked_argument(x)
    p_prev = np.ones_like(xs)
    if ell == 0:
        return p_prev
    p = (3.0 * xs + 1.0) / 2.0
    for n in range(2, ell + 1):
        a = (2 * n + 1) * (2 * n - 1) * xs + 1.0
        b = (n - 1) * (2 * n + 1)
        p_prev, p = p, (a * p - b * p_prev) / ((n + 1) * (2 * n - 1))
    return p


def jacobi_p10(ell: int, x: float) -> float:
    return float(jacobi_p10_values(ell, x))
