"""
Smooth cutoff profile used by the truncated couplings.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from engine.exceptions import DomainError
from engine.geometry.sphere import FloatArray

RAMP_START = 0.25
RAMP_END = 0.5
# 1.5 / (RAMP_END - RAMP_START)
SLOPE_BOUND = 6.0


def _ramp(x: ArrayLike) -> FloatArray:
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError("bump argument must be finite and nonnegative")
    return np.clip((arr - RAMP_START) / (RAMP_END - RAMP_START), 0.0, 1.0)


def bump_values(x: ArrayLike) -> FloatArray:
    """phi(x): 0 on [0, 1/4], 1 on [1/2, inf), cubic smoothstep in between."""
    t = _ramp(x)
    return t * t * (3.0 - 2.0 * t)


def bump_eval(x: float) -> float:
    return float(bump_values(x))


def bump_derivative(x: ArrayLike) -> FloatArray:
    t = _ramp(x)
    return 6.0 * t * (1.0 - t) / (RAMP_END - RAMP_START)


def scaled_bump(distance: ArrayLike, r: float) -> FloatArray:
    """phi_r(d) = phi(d / r)."""
    if not r > 0.0:
        raise DomainError(f"range must be positive, got {r!r}")
    return bump_values(np.asarray(distance, dtype=float) / r)


def cutoff(distance: ArrayLike, r: float) -> FloatArray:
    """1 - phi_r(d); exactly zero once d >= r / 2."""
    return 1.0 - scaled_bump(distance, r)
