"""
Ensemble selection shared by every sub-command.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from engine.enums import EnsembleKind
from engine.fields import FieldSpec, PlanarSpec
from engine.spectral import KernelSpec

# short names accepted by --field
FIELD_ALIASES = {"bf": EnsembleKind.bargmann_fock, "pw": EnsembleKind.plane_wave}


class EnsembleConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: EnsembleKind
    n: Optional[int] = Field(default=None, ge=1)
    ell: Optional[int] = Field(default=None, ge=0)
    alpha: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    beta: float = Field(default=0.5, gt=0.0, lt=1.0)
    waves: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def validate_degree(self) -> "EnsembleConfig":
        if self.kind is EnsembleKind.kostlan:
            if self.n is None:
                raise ValueError("the kostlan ensemble needs n")
            if self.ell is not None:
                raise ValueError("the kostlan ensemble takes n, not ell")
        elif self.kind.is_spherical:
            if self.ell is None:
                raise ValueError(f"the {self.kind.value} ensemble needs ell")
            if self.n is not None:
                raise ValueError(f"the {self.kind.value} ensemble takes ell, not n")
        elif self.n is not None or self.ell is not None:
            raise ValueError(f"the planar {self.kind.value} field has no degree")
        if self.waves is not None and self.kind.is_spherical:
            raise ValueError("waves only applies to planar fields")
        return self

    @property
    def degree(self) -> int:
        return int(self.n if self.kind is EnsembleKind.kostlan else self.ell or 0)

    def to_spec(self) -> FieldSpec:
        if self.kind.is_planar:
            return PlanarSpec(self.kind, 1.0 if self.alpha is None else self.alpha, self.waves)
        alpha = 0.0 if self.alpha is None else self.alpha
        return KernelSpec(self.kind, self.degree, alpha=alpha, beta=self.beta)
