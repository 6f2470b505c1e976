"""
Constants and configuration for the percolab simulation lab.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

import math
import os
from typing import Optional

from pydantic import model_validator
from pydantic_settings import BaseSettings


def _to_int(value: Optional[str], default: int) -> int:
    try:
        return int(str(value).strip()) if value is not None else default
    except ValueError:
        return default


PERCOLAB_OUTPUT_DIR: str = os.getenv("PERCOLAB_OUTPUT_DIR", "runs")
PERCOLAB_JOBS: int = max(1, _to_int(os.getenv("PERCOLAB_JOBS"), os.cpu_count() or 1))
PERCOLAB_LOG_LEVEL: str = os.getenv("PERCOLAB_LOG_LEVEL", "INFO").upper()

CODE_VERSION = "0.1.0"

FOUR_PI = 4.0 * math.pi

# palette used by the renderer, RGB
RENDER_COLORS: dict[str, tuple[int, int, int]] = {
    "dark": (27, 94, 32),
    "mid": (129, 199, 132),
    "light": (241, 243, 238),
    "outline": (198, 40, 40),
}

CSV_ROW_FIELDS = ("experiment", "replicate", "level", "scale")
CSV_ESTIMATE_FIELDS = (
    "name",
    "kind",
    "level",
    "scale",
    "value",
    "standard_error",
    "replicates",
    "seed",
    "config_hash",
    "censored",
)


class Settings(BaseSettings):
    model_config = {"env_prefix": "PERCOLAB_", "extra": "ignore"}

    output_dir: str = PERCOLAB_OUTPUT_DIR
    max_workers: int = PERCOLAB_JOBS

    # spectral
    legendre_domain_tol: float = 1e-12
    kernel_rtol: float = 1e-9
    kostlan_max_degree: int = 512
    rsh_unnormalized_max_degree: int = 1500

    # grids
    grid_max_cells: int = 6_000_000
    cells_per_scale: float = 4.0
    grid_connectivity: str = "moore"
    planar_cells_per_unit: float = 4.0

    # planar limit fields
    planar_waves: int = 1024
    planar_min_waves: int = 64

    # finite range couplings
    orthant_margin: float = 0.05
    bump_slope_bound: float = 6.0
    zonal_quadrature_factor: int = 4
    zonal_quadrature_offset: int = 8
    zonal_support_tol: float = 1e-8
    zonal_max_degree: int = 4096
    kostlan_basis_chunk: int = 4_000_000

    # components and events
    diameter_exact_cap: int = 20_000
    diameter_boundary_cap: int = 2_000
    trunc_arm_window_factor: float = 8.0
    eu_min_cells_across: float = 4.0

    # tilings
    tiling_overlap_margin: float = 0.005
    tiling_curvature_margin: float = 2.0
    tiling_isoperimetry_trials: int = 100
    tiling_cell_samples: int = 12
    tiling_coverage_samples: int = 20

    # experiments and persistence
    deviation_min_hits: int = 5
    float_significant_digits: int = 17
    default_arm_radius: float = 10.0

    @model_validator(mode="after")
    def _validate(self) -> "Settings":
        if self.grid_connectivity not in {"moore", "von_neumann"}:
            raise ValueError("grid_connectivity must be 'moore' or 'von_neumann'")
        if self.planar_min_waves < 1 or self.planar_waves < self.planar_min_waves:
            raise ValueError("planar_waves must be at least planar_min_waves (>= 1)")
        if not 0.0 < self.orthant_margin < 0.5:
            raise ValueError("orthant_margin must lie in (0, 0.5)")
        if self.cells_per_scale <= 0 or self.planar_cells_per_unit <= 0:
            raise ValueError("grid resolutions must be positive")
        if not 0.0 <= self.tiling_overlap_margin < 0.5:
            raise ValueError("tiling_overlap_margin must lie in [0, 0.5)")
        if self.max_workers < 1:
            self.max_workers = 1
        return self


settings = Settings()
