"""
Frequency and mean estimators, censoring of rare frequencies, contrasts and slope fits.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from collections import OrderedDict
from importlib import import_module
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from config import settings
from engine.enums import EstimandKind
from engine.exceptions import DomainError
from engine.experiments.models import Estimate, ReplicateRow
from engine.geometry.sphere import FloatArray

log = logging.getLogger(__name__)

linregress: Callable[..., Any] = import_module("scipy.stats").linregress

RowKey = Tuple[Optional[float], Optional[float]]


def group_rows(rows: Sequence[ReplicateRow]) -> "OrderedDict[RowKey, List[ReplicateRow]]":
    """Rows per (level, scale) in first-seen order, each group sorted by replicate."""
    groups: "OrderedDict[RowKey, List[ReplicateRow]]" = OrderedDict()
    for row in rows:
        groups.setdefault(row.key, []).append(row)
    for key in groups:
        groups[key].sort(key=lambda r: r.replicate)
    return groups


def metric(rows: Sequence[ReplicateRow], name: str) -> FloatArray:
    return np.array([row.metrics[name] for row in rows], dtype=float)


def frequency(hits: ArrayLike) -> Tuple[float, float]:
    """Empirical frequency of 0/1 outcomes and its standard error sqrt(p(1-p)/M)."""
    x = np.asarray(hits, dtype=float)
    if x.size == 0:
        raise DomainError("frequency of an empty sample")
    p = float(np.mean(x))
    return p, math.sqrt(max(p * (1.0 - p), 0.0) / x.size)


def mean_and_se(values: ArrayLike) -> Tuple[float, float]:
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise DomainError("mean of an empty sample")
    if x.size == 1:
        return float(x[0]), 0.0
    return float(np.mean(x)), float(np.std(x, ddof=1) / math.sqrt(x.size))


def frequency_estimate(
    name: str,
    hits: ArrayLike,
    level: Optional[float] = None,
    scale: Optional[float] = None,
    censor: bool = False,
    min_hits: Optional[int] = None,
) -> Estimate:
    """Frequency estimate; with ``censor`` fewer than ``min_hits`` hits report the bound min_hits/M."""
    if min_hits is None:
        min_hits = settings.deviation_min_hits
    x = np.asarray(hits, dtype=float)
    p, se = frequency(x)
    m = int(x.size)
    if censor and int(round(float(np.sum(x)))) < min_hits:
        bound = min(1.0, min_hits / m)
        log.warning("%s censored at level=%s scale=%s: fewer than %d hits in %d", name, level, scale, min_hits, m)
        return Estimate(name, EstimandKind.probability, bound, math.sqrt(bound * (1.0 - bound) / m), m, level, scale, True)
    return Estimate(name, EstimandKind.probability, p, se, m, level, scale)


def mean_estimate(
    name: str,
    values: ArrayLike,
    kind: EstimandKind = EstimandKind.mean,
    level: Optional[float] = None,
    scale: Optional[float] = None,
) -> Estimate:
    x = np.asarray(values, dtype=float)
    mean, se = mean_and_se(x)
    return Estimate(name, kind, mean, se, int(x.size), level, scale)


def variance_estimate(
    name: str,
    values: ArrayLike,
    level: Optional[float] = None,
    scale: Optional[float] = None,
) -> Estimate:
    """Sample variance with the normal-theory standard error var*sqrt(2/(M-1))."""
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        return Estimate(name, EstimandKind.variance, 0.0, 0.0, int(x.size), level, scale)
    var = float(np.var(x, ddof=1))
    return Estimate(name, EstimandKind.variance, var, var * math.sqrt(2.0 / (x.size - 1)), int(x.size), level, scale)


def one_sided_z(low: ArrayLike, high: ArrayLike) -> float:
    """Two-sample z statistic for mean(high) > mean(low)."""
    a = np.asarray(low, dtype=float)
    b = np.asarray(high, dtype=float)
    diff = float(np.mean(b) - np.mean(a))
    var_a = float(np.var(a, ddof=1)) if a.size > 1 else 0.0
    var_b = float(np.var(b, ddof=1)) if b.size > 1 else 0.0
    se = math.sqrt(var_a / a.size + var_b / b.size)
    if se == 0.0:
        return math.copysign(math.inf, diff) if diff != 0.0 else 0.0
    return diff / se


def paired_decrease(before: ArrayLike, after: ArrayLike, sigmas: float) -> bool:
    """Matched-replicate mean(before - after) exceeds ``sigmas`` standard errors."""
    d = np.asarray(before, dtype=float) - np.asarray(after, dtype=float)
    mean, se = mean_and_se(d)
    return mean > sigmas * se if se > 0.0 else mean > 0.0


def separated(first: Estimate, second: Estimate, sigmas: float) -> bool:
    """second exceeds first by more than ``sigmas`` pooled standard errors."""
    pooled = math.hypot(first.standard_error, second.standard_error)
    return second.value - first.value > sigmas * pooled


def log_slope(x: ArrayLike, y: ArrayLike) -> Optional[Tuple[float, float]]:
    """Least-squares slope of log y against x over positive y, with its standard error."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    keep = ys > 0.0
    if int(np.sum(keep)) < 2 or np.unique(xs[keep]).size < 2:
        return None
    fit = linregress(xs[keep], np.log(ys[keep]))
    stderr = float(fit.stderr) if math.isfinite(float(fit.stderr)) else 0.0
    return float(fit.slope), stderr


def levels_in_order(rows: Sequence[ReplicateRow]) -> List[float]:
    seen: Dict[float, None] = {}
    for row in rows:
        if row.level is not None:
            seen.setdefault(row.level, None)
    return list(seen)


def scales_in_order(rows: Sequence[ReplicateRow]) -> List[float]:
    seen: Dict[float, None] = {}
    for row in rows:
        if row.scale is not None:
            seen.setdefault(row.scale, None)
    return list(seen)
