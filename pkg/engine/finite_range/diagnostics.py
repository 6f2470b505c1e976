"""
Coupling-error statistics: sup of |f - f^(r)| over caps and pointwise difference variances.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from engine.exceptions import DomainError
from engine.finite_range.models import CoupledPair, SupStats
from engine.geometry.sphere import FloatArray, SphericalCap

log = logging.getLogger(__name__)

LADDER_FACTORS = (0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5)


def cap_masks(pair: CoupledPair, caps: Sequence[SphericalCap]) -> list[np.ndarray]:
    pos = pair.full.grid.positions
    masks = [cap.contains(pos) for cap in caps]
    for i, mask in enumerate(masks):
        if not np.any(mask):
            raise DomainError(f"cap {i} contains no cell of the coupled grid")
    return masks


def threshold_ladder(mean_sup: float, factors: Sequence[float] = LADDER_FACTORS) -> list[float]:
    if mean_sup <= 0.0:
        return [0.0]
    return [float(mean_sup * f) for f in factors]


def coupling_sup_stats(
    pairs: Sequence[CoupledPair],
    caps: Sequence[SphericalCap],
    thresholds: Optional[Sequence[float]] = None,
) -> SupStats:
    """Empirical law of max over each cap of |f - f^(r)|, pooled over the caps' maxima per replicate."""
    if not pairs:
        raise DomainError("need at least one coupled pair")
    r = pairs[0].range
    masks = cap_masks(pairs[0], caps)
    per_cap = np.empty((len(pairs), len(masks)))
    for i, pair in enumerate(pairs):
        if pair.range != r:
            raise DomainError("all pairs must share the same range")
        diff = np.abs(pair.difference)
        per_cap[i] = [float(np.max(diff[m])) for m in masks]
    sups = np.max(per_cap, axis=1)
    mean_sup = float(np.mean(sups))
    if thresholds is None:
        thresholds = threshold_ladder(mean_sup)
    exceedance = [float(np.mean(sups > t)) for t in thresholds]
    stats = SupStats(
        range=r,
        replicates=len(pairs),
        mean_sup=mean_sup,
        std_sup=float(np.std(sups, ddof=1)) if len(pairs) > 1 else 0.0,
        thresholds=[float(t) for t in thresholds],
        exceedance=exceedance,
        per_cap_mean=np.mean(per_cap, axis=0).tolist(),
    )
    log.debug("sup stats r=%.4g over %d pairs: mean %.4g", r, len(pairs), mean_sup)
    return stats


def difference_variance(pairs: Sequence[CoupledPair]) -> FloatArray:
    """Per-cell empirical E[(f - f^(r))^2]; the difference has mean zero."""
    if not pairs:
        raise DomainError("need at least one coupled pair")
    stack = np.stack([p.difference for p in pairs])
    return np.mean(stack**2, axis=0)
