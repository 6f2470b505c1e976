"""
Test cases for (u, eps)-tilings: the curvature threshold, strict and lenient construction, and the axiom checks with their failure witnesses.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

import math

import numpy as np
import pytest

from engine.enums import TilingProperty
from engine.exceptions import DomainError, InfeasibleTilingError
from engine.geometry import (
    NORTH_POLE,
    SpherePoint,
    SphereSquare,
    SphericalCap,
    Tiling,
    build_tiling,
    check_tiling,
    count_bound,
    curvature_threshold,
    overlap_error,
    square_area,
)
from engine.geometry.sphere import sph_dist


@pytest.fixture(scope="module")
def cap_tiling():
    region = SphericalCap(SpherePoint.from_latlon(0.4, 1.1), 0.2)
    return build_tiling(0.004, 0.1, region)


def test_curvature_threshold_zero_for_large_regions():
    assert curvature_threshold(0.1, math.pi) == 0.0
    assert curvature_threshold(0.1, 1.0) == 0.0
    assert overlap_error(0.05, math.pi) == 1.0


def test_curvature_threshold_small_cap():
    rho = curvature_threshold(0.1, 0.2)
    assert 0.004 < rho < 0.2
    assert overlap_error(rho * 0.99, 0.2) < 0.05
    assert curvature_threshold(0.1, 0.2) == rho


@pytest.mark.parametrize("radius", [4.0, 1.0])
@pytest.mark.parametrize("u", [0.05, 0.1])
def test_strict_mode_rejects_infeasible_pairs(radius, u):
    with pytest.raises(InfeasibleTilingError):
        build_tiling(u, 0.1, SphericalCap(NORTH_POLE, radius))


def _latitude_row(lat, count, u):
    tiles = []
    for lon in 2.0 * math.pi * np.arange(count) / count:
        east = np.array([-math.sin(lon), math.cos(lon), 0.0])
        north = np.array([-math.sin(lat) * math.cos(lon), -math.sin(lat) * math.sin(lon), math.cos(lat)])
        tiles.append(SphereSquare.from_frame(SpherePoint.from_latlon(lat, lon), (east, north), u))
    return tiles


def test_row_count_change_forces_ninth_neighbour():
    # rows of 64 and 63 tiles touching along the equator slip by one spacing around the loop
    u = 0.05
    rows = _latitude_row(-u, 64, u) + _latitude_row(u, 63, u) + _latitude_row(3.0 * u, 63, u)
    tiling = Tiling(tuple(rows), SphericalCap(NORTH_POLE, math.pi), 0.1, u)
    report = check_tiling(tiling)
    assert report.failed(TilingProperty.local_boundedness)
    assert report.max_neighbors == 9
    failure = next(f for f in report.failures if f.prop is TilingProperty.local_boundedness)
    assert 64 + 30 <= failure.witness["tile"] <= 64 + 33


def test_build_tiling_validates_arguments():
    region = SphericalCap(NORTH_POLE, 0.2)
    with pytest.raises(DomainError):
        build_tiling(0.004, 1.5, region)
    with pytest.raises(DomainError):
        build_tiling(0.0, 0.1, region)
    with pytest.raises(DomainError):
        build_tiling(0.004, 0.1, SphericalCap(NORTH_POLE, -1.0))


def test_degenerate_region_single_tile():
    region = SphericalCap(SpherePoint.from_latlon(-0.3, 0.7), 0.05)
    tiling = build_tiling(0.05, 0.1, region)
    assert tiling.n == 1
    assert sph_dist(tiling.tiles[0].center, region.center) < 1e-12
    assert check_tiling(tiling).passed


def test_feasible_cap_tiling_passes_all_axioms(cap_tiling):
    report = check_tiling(cap_tiling)
    assert report.passed, report.failures
    assert report.n == cap_tiling.n
    assert cap_tiling.n <= count_bound(cap_tiling.region, 0.004, 0.1)
    assert report.covered_fraction == 1.0
    assert report.min_exclusive_fraction >= 0.9
    assert report.max_neighbors == 8
    assert report.isoperimetry_trials > 100


def test_feasible_square_tiling_passes():
    region = SphereSquare.at(SpherePoint.from_latlon(-0.2, 0.3), 0.1, angle=0.5)
    tiling = build_tiling(0.0041, 0.1, region)
    report = check_tiling(tiling, seed=4)
    assert report.passed, report.failures
    assert tiling.n * square_area(0.0041) >= region.area


def test_interior_tile_removed_reports_coverage(cap_tiling):
    centre = cap_tiling.region.center.array
    inner = int(np.argmax(cap_tiling.centers @ centre))
    report = check_tiling(cap_tiling.without([inner]))
    assert report.failed(TilingProperty.coverage)
    failure = next(f for f in report.failures if f.prop is TilingProperty.coverage)
    lat, lon = failure.witness["point_latlon"]
    assert cap_tiling.tiles[inner].contains(SpherePoint.from_latlon(lat, lon).array)[0]


def test_far_apart_tiles_fail_coverage():
    region = SphericalCap(NORTH_POLE, 0.5)
    tiles = (SphereSquare.at(NORTH_POLE, 0.05), SphereSquare.at(SpherePoint.from_latlon(0.0, 2.0), 0.05))
    report = check_tiling(Tiling(tiles, region, 0.1, 0.05))
    assert not report.passed
    assert report.failed(TilingProperty.coverage)
    assert report.covered_fraction < 0.1


def test_duplicate_tiles_fail_overlap_and_count():
    sq = SphereSquare.at(NORTH_POLE, 0.05)
    report = check_tiling(Tiling((sq, sq), SphericalCap(NORTH_POLE, 0.02), 0.1, 0.05))
    assert report.failed(TilingProperty.exclusive_area)
    assert report.failed(TilingProperty.count_bound)
    assert not report.failed(TilingProperty.coverage)


def test_lenient_mode_reports_count_bound_witness():
    tiling = build_tiling(0.1, 0.1, SphericalCap(NORTH_POLE, 1.0), strict=False)
    report = check_tiling(tiling)
    assert report.failed(TilingProperty.count_bound)
    failure = next(f for f in report.failures if f.prop is TilingProperty.count_bound)
    assert failure.witness["n"] == tiling.n
    assert failure.witness["bound"] < tiling.n


def test_tiling_document(cap_tiling):
    doc = cap_tiling.document()
    assert doc["half_side"] == 0.004
    assert doc["region"]["kind"] == "cap"
    assert len(doc["tiles"]) == cap_tiling.n
    first = doc["tiles"][0]
    assert len(first["rotation"]) == 3 and len(first["center_latlon"]) == 2
