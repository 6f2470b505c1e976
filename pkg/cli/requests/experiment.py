"""
Experiment configuration documents.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from engine.enums import Connectivity, EnsembleKind, ExperimentKind

from ._ensemble import EnsembleConfig

# keys that never change results and stay out of the config hash
UNHASHED_FIELDS = {"output_dir", "jobs"}

_PLANAR_ONLY = {ExperimentKind.theta, ExperimentKind.phi, ExperimentKind.duality, ExperimentKind.stability}
_SINGLE_LEVEL = {ExperimentKind.duality, ExperimentKind.stability, ExperimentKind.concentration}


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    experiment: ExperimentKind
    ensemble: EnsembleConfig
    levels: List[float] = Field(default_factory=list)
    replicates: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    resolution: Optional[float] = Field(default=None, gt=0.0)
    connectivity: Optional[Connectivity] = None
    radius: Optional[float] = Field(default=None, gt=0.0)
    window: Optional[float] = Field(default=None, gt=0.0)
    correction: bool = False
    radii: List[float] = Field(default_factory=list)
    delta: float = Field(default=0.01, gt=0.0, le=1.0)
    epsilons: List[float] = Field(default_factory=lambda: [0.01, 0.02, 0.05, 0.1])
    sizes: List[float] = Field(default_factory=list)
    reference: Optional[float] = None
    giant_fraction: float = Field(default=0.1, gt=0.0, lt=1.0)
    settings: Dict[str, object] = Field(default_factory=dict)
    output_dir: Optional[str] = None
    jobs: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def validate_experiment(self) -> "ExperimentConfig":
        if any(not math.isfinite(t) for t in self.levels):
            raise ValueError("levels must be finite")
        if any(not (math.isfinite(r) and r > 0.0) for r in self.radii):
            raise ValueError("radii must be positive and finite")
        if any(not (math.isfinite(e) and e > 0.0) for e in self.epsilons):
            raise ValueError("epsilons must be positive and finite")
        if any(not (math.isfinite(u) and u > 0.0) for u in self.sizes):
            raise ValueError("sizes must be positive and finite")
        kind = self.experiment
        planar = self.ensemble.kind.is_planar
        if kind in _PLANAR_ONLY and not planar:
            raise ValueError(f"the {kind.value} experiment runs on a planar limit field")
        if kind not in _PLANAR_ONLY and planar:
            raise ValueError(f"the {kind.value} experiment runs on a spherical ensemble")
        if kind is ExperimentKind.theta and self.ensemble.kind is not EnsembleKind.bargmann_fock:
            raise ValueError("theta is estimated on the Bargmann-Fock field")
        if kind is ExperimentKind.phi and self.ensemble.kind is not EnsembleKind.plane_wave:
            raise ValueError("phi is estimated on the plane wave field")
        if kind is not ExperimentKind.coupling and not self.levels:
            raise ValueError(f"the {kind.value} experiment needs at least one level")
        if kind in _SINGLE_LEVEL and len(self.levels) != 1:
            raise ValueError(f"the {kind.value} experiment takes exactly one level")
        if kind in (ExperimentKind.eu, ExperimentKind.coupling) and not self.radii:
            raise ValueError(f"the {kind.value} experiment needs a ladder of radii")
        if kind in (ExperimentKind.duality, ExperimentKind.stability) and self.radius is None:
            raise ValueError(f"the {kind.value} experiment needs a radius")
        if kind is ExperimentKind.concentration and not self.sizes:
            raise ValueError("the concentration experiment needs a ladder of sizes")
        if kind is ExperimentKind.stability and not self.epsilons:
            raise ValueError("the stability experiment needs epsilons")
        if "output_dir" in self.settings or "max_workers" in self.settings:
            raise ValueError("settings may not override output_dir or max_workers")
        return self
