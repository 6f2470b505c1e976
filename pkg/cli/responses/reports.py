"""
Run manifests and the reports printed by the kernel, sample and tiling commands.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import Field

from custom_types.json import JSONDict
from engine.enums import EnsembleKind, ExperimentKind, TilingProperty

from .base import NpModel


class RunManifest(NpModel):
    experiment: ExperimentKind
    config_hash: str
    config: JSONDict
    code_version: str
    started_at: str
    wall_time_seconds: float = 0.0
    complete: bool = False
    error: Optional[str] = None
    replicates: int
    completed_replicates: int = 0
    row_count: int = 0
    estimate_count: int = 0
    workers: int = 1
    checks: Dict[str, bool] = Field(default_factory=dict)
    files: List[str] = Field(default_factory=list)


class KernelBoundRow(NpModel):
    kind: EnsembleKind
    degree: int
    rate: str
    points: int
    explicit: bool
    passed: bool
    empirical_constant: float
    worst_theta: float


class KernelCheckResponse(NpModel):
    passed: bool
    rows: List[KernelBoundRow]
    error: Optional[str] = None


class SampleResponse(NpModel):
    label: str
    seed: int
    replicate: int
    cells: int
    data_path: str
    sidecar_path: str


class TilingFailureRow(NpModel):
    prop: TilingProperty
    message: str
    witness: JSONDict = Field(default_factory=dict)


class TilingResponse(NpModel):
    passed: bool
    n: int
    half_side: float
    eps: float
    covered_fraction: float
    min_exclusive_fraction: float
    count_bound: float
    max_neighbors: int
    isoperimetry_trials: int
    failures: List[TilingFailureRow] = Field(default_factory=list)
    tiling_path: Optional[str] = None
