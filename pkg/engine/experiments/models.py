"""
Replicate rows, estimates and campaign descriptions shared by every experiment.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from config import FOUR_PI
from engine.enums import EstimandKind, ExperimentKind
from engine.exceptions import ConsistencyError, DomainError

log = logging.getLogger(__name__)

_UNIT_KINDS = (EstimandKind.probability, EstimandKind.area_fraction)


@dataclass(frozen=True)
class ReplicateRow:
    """Per-replicate measurements at one (level, scale) point."""

    replicate: int
    level: Optional[float]
    scale: Optional[float]
    metrics: Dict[str, float]

    @property
    def key(self) -> Tuple[Optional[float], Optional[float]]:
        return self.level, self.scale


@dataclass(frozen=True)
class Estimate:
    name: str
    kind: EstimandKind
    value: float
    standard_error: float
    replicates: int
    level: Optional[float] = None
    scale: Optional[float] = None
    censored: bool = False

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ConsistencyError(f"estimate {self.name} needs at least one replicate")
        if math.isnan(self.value):
            return
        if self.kind in _UNIT_KINDS and not 0.0 <= self.value <= 1.0:
            raise ConsistencyError(f"{self.kind.value} estimate {self.name}={self.value!r} outside [0, 1]")
        if self.kind is EstimandKind.area and not 0.0 <= self.value <= FOUR_PI + 1e-9:
            raise ConsistencyError(f"area estimate {self.name}={self.value!r} outside [0, 4pi]")
        if self.kind is EstimandKind.variance and self.value < 0.0:
            raise ConsistencyError(f"variance estimate {self.name} is negative")
        if self.standard_error < 0.0:
            raise ConsistencyError(f"estimate {self.name} has a negative standard error")


@dataclass
class Summary:
    estimates: List[Estimate] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)

    def find(self, name: str, level: Optional[float] = None, scale: Optional[float] = None) -> Estimate:
        for est in self.estimates:
            if est.name != name:
                continue
            if level is not None and est.level != level:
                continue
            if scale is not None and est.scale != scale:
                continue
            return est
        raise KeyError(f"no estimate {name!r} at level={level!r} scale={scale!r}")

    def named(self, name: str) -> List[Estimate]:
        return [e for e in self.estimates if e.name == name]

    def check(self, name: str, passed: bool) -> None:
        self.checks[name] = bool(passed)
        if not passed:
            log.warning("check %s failed", name)


ReplicateFn = Callable[[int], List[ReplicateRow]]
SummaryFn = Callable[[Sequence[ReplicateRow]], Summary]


@dataclass(frozen=True)
class Campaign:
    """Replicate kernel plus the aggregation applied to its rows in replicate order."""

    kind: ExperimentKind
    replicate: ReplicateFn
    summarize: SummaryFn

    def run(self, replicates: int) -> Tuple[List[ReplicateRow], Summary]:
        if replicates < 1:
            raise DomainError(f"need at least one replicate, got {replicates}")
        rows: List[ReplicateRow] = []
        for i in range(replicates):
            rows.extend(self.replicate(i))
        return rows, self.summarize(rows)
