"""
Coupled field pairs and the reports produced by the finite-range constructions.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from engine.fields.models import FieldSample
from engine.geometry.sphere import FloatArray
from engine.spectral import ZonalCoefficients


@dataclass(frozen=True, eq=False)
class CoupledPair:
    """A field and its r-range dependent truncation drawn from one coefficient vector."""

    full: FieldSample
    truncated: FieldSample
    range: float
    shared_seed: int
    analytic_variance: Optional[FloatArray] = None

    @property
    def replicate(self) -> int:
        return self.full.replicate

    @property
    def difference(self) -> FloatArray:
        return self.full.values - self.truncated.values

    @property
    def identical(self) -> bool:
        return bool(np.array_equal(self.full.values, self.truncated.values))


@dataclass(frozen=True)
class SupportAudit:
    degree: int
    range: float
    basis_count: int
    active_basis: int
    max_shared_distance: float
    witness: Optional[Tuple[int, int, int]] = None

    @property
    def passed(self) -> bool:
        return self.witness is None and self.max_shared_distance < self.range


@dataclass(frozen=True)
class LocalizationReport:
    degree: int
    margin: float
    samples: int
    min_value: float
    fitted_constant: float
    fitted_rate: float
    bin_edges: List[float]
    bin_maxima: List[float]
    monotone: bool
    near_count: int
    near_radius: float

    @property
    def near_constant(self) -> float:
        """Count of localization points near one sample, in units of radius^2 n^2."""
        return self.near_count / (self.near_radius**2 * self.degree**2)


@dataclass(frozen=True, eq=False)
class ZonalTruncation:
    """Re-expanded coefficients of the truncated zonal function q (1 - phi_r)."""

    original: ZonalCoefficients
    truncated: ZonalCoefficients
    range: float
    nodes: int
    residual: float
    quadrature_error: float

    @property
    def degree(self) -> int:
        return self.truncated.lmax

    @property
    def variance_gap(self) -> float:
        """Exact Var(f - f^(r)) = sum (c - c~)^2, identical at every point."""
        size = max(self.original.c.size, self.truncated.c.size)
        c = np.zeros(size)
        ct = np.zeros(size)
        c[: self.original.c.size] = self.original.c
        ct[: self.truncated.c.size] = self.truncated.c
        return float(np.sum((c - ct) ** 2))


@dataclass(frozen=True)
class SupStats:
    range: float
    replicates: int
    mean_sup: float
    std_sup: float
    thresholds: List[float] = field(default_factory=list)
    exceedance: List[float] = field(default_factory=list)
    per_cap_mean: List[float] = field(default_factory=list)

    @property
    def decay_accelerates(self) -> bool:
        """Log exceedance slopes are nonincreasing along the ladder wherever three neighbours are positive."""
        freq = np.asarray(self.exceedance, dtype=float)
        t = np.asarray(self.thresholds, dtype=float)
        for i in range(1, freq.size - 1):
            if freq[i - 1] <= 0.0 or freq[i] <= 0.0 or freq[i + 1] <= 0.0:
                continue
            left = (np.log(freq[i]) - np.log(freq[i - 1])) / (t[i] - t[i - 1])
            right = (np.log(freq[i + 1]) - np.log(freq[i])) / (t[i + 1] - t[i])
            if right > left + 1e-12:
                return False
        return True
