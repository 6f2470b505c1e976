"""
Estimate and replicate row records written by experiment runs.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import math
from typing import Optional

from pydantic import Field, model_validator

from engine.enums import EstimandKind
from engine.experiments import Estimate

from .base import NpModel


class EstimateRecord(NpModel):
    name: str
    kind: EstimandKind
    level: Optional[float] = None
    scale: Optional[float] = None
    value: float
    standard_error: float
    replicates: int = Field(ge=1)
    seed: int = Field(ge=0)
    config_hash: str
    censored: bool = False

    @model_validator(mode="after")
    def validate_range(self) -> "EstimateRecord":
        if self.kind in (EstimandKind.probability, EstimandKind.area_fraction) and not math.isnan(self.value):
            if not 0.0 <= self.value <= 1.0:
                raise ValueError(f"{self.name}: {self.kind.value} {self.value!r} outside [0, 1]")
        return self

    @classmethod
    def from_estimate(cls, est: Estimate, seed: int, config_hash: str) -> "EstimateRecord":
        return cls(
            name=est.name,
            kind=est.kind,
            level=est.level,
            scale=est.scale,
            value=est.value,
            standard_error=est.standard_error,
            replicates=est.replicates,
            seed=seed,
            config_hash=config_hash,
            censored=est.censored,
        )
