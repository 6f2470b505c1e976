"""
Sphere geometry: points, caps, squares, discretization grids and tilings.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from engine.geometry.grid import (
    LatticeGrid,
    PatchGrid,
    PlanarGrid,
    SphereGrid,
    build_grid,
    build_patch_grid,
    build_planar_grid,
    default_connectivity,
    distances_from,
    grid_from_descriptor,
    neighbor_offsets,
)
from engine.geometry.sphere import (
    NORTH_POLE,
    Region,
    SpherePoint,
    SphereSquare,
    SphericalCap,
    angle_to_chord,
    as_array,
    cap_area,
    chord_to_angle,
    exp_map,
    exp_map_array,
    log_map,
    log_map_array,
    points_to_latlon,
    random_rotation,
    region_boundary,
    region_center,
    region_contains,
    rotated_frame,
    rotation_about,
    sample_region,
    sph_dist,
    sph_dist_array,
    square_area,
    square_contains,
    tangent_frame,
)
from engine.geometry.tiling import (
    Tiling,
    TilingFailure,
    TilingReport,
    build_tiling,
    check_tiling,
    count_bound,
    curvature_threshold,
    overlap_error,
    tiling_margin,
)

__all__ = [
    "LatticeGrid",
    "NORTH_POLE",
    "PatchGrid",
    "PlanarGrid",
    "Region",
    "SphereGrid",
    "SpherePoint",
    "SphereSquare",
    "SphericalCap",
    "Tiling",
    "TilingFailure",
    "TilingReport",
    "angle_to_chord",
    "as_array",
    "build_grid",
    "build_patch_grid",
    "build_planar_grid",
    "build_tiling",
    "cap_area",
    "check_tiling",
    "chord_to_angle",
    "count_bound",
    "curvature_threshold",
    "default_connectivity",
    "distances_from",
    "exp_map",
    "exp_map_array",
    "grid_from_descriptor",
    "log_map",
    "log_map_array",
    "neighbor_offsets",
    "overlap_error",
    "points_to_latlon",
    "random_rotation",
    "region_boundary",
    "region_center",
    "region_contains",
    "rotated_frame",
    "rotation_about",
    "sample_region",
    "sph_dist",
    "sph_dist_array",
    "square_area",
    "square_contains",
    "tangent_frame",
    "tiling_margin",
]
