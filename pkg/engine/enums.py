"""
Enumerations for ensembles, events, giant criteria, grid topology and rendering.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from enum import Enum


class EnsembleKind(str, Enum):
    kostlan = "kostlan"
    rsh = "rsh"
    bandlimited = "bandlimited"
    mono = "mono"
    bargmann_fock = "bargmann_fock"
    plane_wave = "plane_wave"

    @property
    def is_planar(self) -> bool:
        return self in (EnsembleKind.bargmann_fock, EnsembleKind.plane_wave)

    @property
    def is_spherical(self) -> bool:
        return not self.is_planar


class Connectivity(str, Enum):
    moore = "moore"
    von_neumann = "von_neumann"

    def dual(self) -> Connectivity:
        return Connectivity.von_neumann if self is Connectivity.moore else Connectivity.moore


class GiantCriterion(str, Enum):
    area = "area"
    diameter = "diameter"


class DiameterMode(str, Enum):
    exact = "exact"
    subsampled = "subsampled"


class EventKind(str, Enum):
    ann_cross = "ann_cross"
    ann_circ = "ann_circ"
    arm = "arm"
    trunc_arm = "trunc_arm"
    eu = "eu"


class EstimandKind(str, Enum):
    probability = "probability"
    area_fraction = "area_fraction"
    area = "area"
    variance = "variance"
    ratio = "ratio"
    slope = "slope"
    mean = "mean"
    statistic = "statistic"


class ExperimentKind(str, Enum):
    theta = "theta"
    phi = "phi"
    giant = "giant"
    eu = "eu"
    coupling = "coupling"
    stability = "stability"
    duality = "duality"
    concentration = "concentration"
    rare = "rare"


class Palette(str, Enum):
    binary = "binary"
    overlay = "overlay"
    components = "components"


class TilingProperty(str, Enum):
    coverage = "coverage"
    exclusive_area = "exclusive_area"
    count_bound = "count_bound"
    local_boundedness = "local_boundedness"
    isoperimetry = "isoperimetry"
