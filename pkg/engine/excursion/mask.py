"""
Excursion sets {f <= t} on a grid.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from engine.exceptions import DomainError
from engine.fields.models import FieldSample
from engine.geometry.grid import BoolArray, LatticeGrid


@dataclass(frozen=True, eq=False)
class ExcursionMask:
    grid: LatticeGrid
    level: float
    inside: BoolArray

    def __post_init__(self) -> None:
        inside = np.ascontiguousarray(self.inside, dtype=bool).ravel()
        if inside.size != self.grid.size:
            raise DomainError(f"mask has {inside.size} cells for a grid of {self.grid.size}")
        inside.setflags(write=False)
        object.__setattr__(self, "inside", inside)

    @property
    def grid_ref(self) -> str:
        return self.grid.identity

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.inside))

    @property
    def empty(self) -> bool:
        return not bool(np.any(self.inside))

    @property
    def area(self) -> float:
        return float(np.sum(self.grid.cell_area[self.inside]))

    @property
    def fraction(self) -> float:
        return self.area / self.grid.total_area

    def restricted(self, region: ArrayLike) -> ExcursionMask:
        return ExcursionMask(self.grid, self.level, self.inside & np.asarray(region, dtype=bool).ravel())

    def complement(self) -> ExcursionMask:
        """The super-level set {f > t} on the same grid."""
        return ExcursionMask(self.grid, self.level, ~self.inside)


def excursion_mask(sample: FieldSample, t: float) -> ExcursionMask:
    if math.isnan(t):
        raise DomainError("level must not be NaN")
    return ExcursionMask(sample.grid, float(t), sample.values <= t)


def mask_from_cells(grid: LatticeGrid, inside: ArrayLike, level: float = math.nan) -> ExcursionMask:
    """Wrap a hand-built boolean cell set; ``level`` is informational."""
    return ExcursionMask(grid, level, np.asarray(inside, dtype=bool))
