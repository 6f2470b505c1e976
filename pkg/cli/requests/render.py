"""
Render request models.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import math
from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from engine.enums import Palette


class RenderConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    levels: List[float] = Field(min_length=1, max_length=2)
    width: int = Field(default=512, ge=64)
    palette: Palette = Palette.binary
    outline: bool = False

    @model_validator(mode="after")
    def validate_levels(self) -> "RenderConfig":
        if any(not math.isfinite(t) for t in self.levels):
            raise ValueError("levels must be finite")
        if self.palette is Palette.overlay:
            if len(self.levels) != 2:
                raise ValueError("the overlay palette needs two levels")
            if not self.levels[0] < self.levels[1]:
                raise ValueError("overlay levels must satisfy t1 < t2")
        elif len(self.levels) != 1:
            raise ValueError(f"the {self.palette.value} palette takes one level")
        return self
