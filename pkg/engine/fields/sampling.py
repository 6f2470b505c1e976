"""
Single entry point drawing one replicate of any field spec on a grid.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from engine.fields.models import FieldSample, FieldSpec, PlanarSpec
from engine.fields.planar import sample_planar
from engine.fields.spherical import sample_isotropic, sample_spherical
from engine.geometry.grid import LatticeGrid
from engine.spectral import KernelSpec


def sample_field(spec: FieldSpec, grid: LatticeGrid, seed: int, replicate: int = 0) -> FieldSample:
    if isinstance(spec, PlanarSpec):
        return sample_planar(spec, grid, seed, replicate)
    if isinstance(spec, KernelSpec):
        return sample_spherical(spec, grid, seed, replicate)
    return sample_isotropic(spec, grid, seed, replicate)
