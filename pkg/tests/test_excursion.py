"""
Test cases for excursion analysis: masks, component labeling against a breadth-first oracle, giants, diameters and events.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

import math
from collections import deque

import numpy as np
import pytest

from config import FOUR_PI, settings
from engine.enums import Connectivity, DiameterMode, EventKind, GiantCriterion
from engine.exceptions import DomainError, EmptyMaskError, ResolutionError, SizeError, WindowError
from engine.excursion import (
    DisjointSet,
    EventSpec,
    ann_circ,
    ann_cross,
    arm,
    component_diameter,
    eu_family,
    eu_grid,
    eu_report,
    event_occurs,
    excursion_mask,
    giant,
    giant_area_fraction,
    label_components,
    level_sweep,
    mask_from_cells,
    trunc_arm,
)
from engine.fields import PlanarSpec, sample_rsh, spec_scale
from engine.fields.models import FieldSample
from engine.geometry import NORTH_POLE, PlanarGrid, SphereGrid, SpherePoint, build_grid
from engine.spectral import KernelSpec


def _bfs_labels(grid, inside, connectivity):
    labels = np.full(grid.size, -1, dtype=np.int64)
    adjacency = grid.adjacency(connectivity)
    next_id = 0
    for start in range(grid.size):
        if not inside[start] or labels[start] >= 0:
            continue
        labels[start] = next_id
        queue = deque([start])
        while queue:
            cell = queue.popleft()
            for nb in adjacency[cell]:
                if inside[nb] and labels[nb] < 0:
                    labels[nb] = next_id
                    queue.append(nb)
        next_id += 1
    return labels


def _constant_sample(grid, value=0.0):
    return FieldSample(grid, np.full(grid.size, value), np.zeros(0), PlanarSpec.bargmann_fock(), seed=0)


def _planar_sample(values, side=16.0):
    n = int(round(math.sqrt(values.size)))
    return FieldSample(PlanarGrid.square(side, n), values, np.zeros(0), PlanarSpec.bargmann_fock(), seed=0)


def _check_oracle(grid, count, seed, density):
    rng = np.random.default_rng(seed)
    for conn in (Connectivity.moore, Connectivity.von_neumann):
        for _ in range(count):
            inside = rng.random(grid.size) < density
            labeling = label_components(mask_from_cells(grid, inside), conn)
            assert np.array_equal(labeling.labels, _bfs_labels(grid, inside, conn))


def test_mask_limits_and_nesting():
    grid = SphereGrid.global_grid(12)
    sample = sample_rsh(4, grid, seed=1)
    assert excursion_mask(sample, math.inf).count == grid.size
    assert excursion_mask(sample, -math.inf).count == 0
    low, high = excursion_mask(sample, -0.1), excursion_mask(sample, 0.1)
    assert np.all(high.inside[low.inside])
    assert high.complement().count == grid.size - high.count
    with pytest.raises(DomainError):
        excursion_mask(sample, math.nan)


def test_disjoint_set_keeps_smallest_root():
    ds = DisjointSet(6)
    ds.union(4, 2)
    ds.union(5, 4)
    ds.union(3, 1)
    assert ds.find(5) == 2
    assert ds.roots().tolist() == [0, 1, 2, 1, 2, 2]


def test_labeling_matches_bfs_oracle_on_sphere_masks():
    _check_oracle(SphereGrid(16, 32), 60, seed=3, density=0.55)


def test_labeling_matches_bfs_oracle_on_planar_masks():
    _check_oracle(PlanarGrid.square(16.0, 64), 10, seed=4, density=0.5)


@pytest.mark.slow
def test_labeling_oracle_full_campaign():
    _check_oracle(SphereGrid(16, 32), 500, seed=5, density=0.55)
    _check_oracle(PlanarGrid.square(16.0, 64), 100, seed=6, density=0.55)


def test_labeling_merges_seam_and_poles():
    grid = SphereGrid(6, 12)
    inside = np.zeros(grid.size, dtype=bool)
    inside[[0, 6]] = True  # two cells of the first row, far apart
    inside[[2 * 12, 2 * 12 + 11]] = True  # first and last column of row 2
    labeling = label_components(mask_from_cells(grid, inside), Connectivity.von_neumann)
    assert labeling.count == 2
    assert labeling.labels[0] == labeling.labels[6] == 0
    assert labeling.labels[24] == labeling.labels[35] == 1
    assert [c.representative for c in labeling.components] == [0, 24]


def test_empty_and_full_masks():
    grid = SphereGrid.global_grid(20)
    empty = label_components(mask_from_cells(grid, np.zeros(grid.size, dtype=bool)))
    assert empty.count == 0
    assert empty.partition() == []
    with pytest.raises(EmptyMaskError):
        giant(empty)
    full = label_components(mask_from_cells(grid, np.ones(grid.size, dtype=bool)))
    assert full.count == 1
    assert full.components[0].area == pytest.approx(FOUR_PI, abs=1e-9)


def test_component_areas_are_conserved():
    grid = SphereGrid.global_grid(30)
    sample = sample_rsh(10, grid, seed=7)
    mask = excursion_mask(sample, 0.2)
    labeling = label_components(mask)
    outside = float(np.sum(grid.cell_area[~mask.inside]))
    assert float(np.sum(labeling.areas)) + outside == pytest.approx(grid.total_area, abs=1e-9)
    assert sum(len(p) for p in labeling.partition()) == mask.count


def test_giant_criteria_disagree_on_arc_and_blob():
    grid = PlanarGrid.square(64.0, 64)
    cells = np.zeros((64, 64), dtype=bool)
    cells[5, 2:42] = True
    cells[20:28, 20:28] = True
    labeling = label_components(mask_from_cells(grid, cells.ravel()))
    assert labeling.count == 2
    arc = int(labeling.labels[5 * 64 + 2])
    blob = int(labeling.labels[20 * 64 + 20])
    by_area = giant(labeling, GiantCriterion.area)
    by_diameter = giant(labeling, GiantCriterion.diameter)
    assert by_area.component == blob
    assert by_diameter.component == arc
    assert by_diameter.diameter == pytest.approx(39.0)
    assert by_area.area >= by_diameter.area


def test_single_component_is_giant_both_ways():
    grid = PlanarGrid.square(8.0, 8)
    cells = np.zeros(64, dtype=bool)
    cells[9:12] = True
    labeling = label_components(mask_from_cells(grid, cells))
    assert giant(labeling).component == giant(labeling, GiantCriterion.diameter).component == 0


def test_component_diameter_modes():
    grid = SphereGrid.global_grid(24)
    assert component_diameter(grid, [5]) == 0.0
    everything = np.arange(grid.size)
    assert component_diameter(grid, everything) == pytest.approx(math.pi, abs=grid.spacing)
    assert component_diameter(grid, everything, DiameterMode.subsampled) == pytest.approx(math.pi, abs=grid.spacing)

    fine = SphereGrid.global_grid(180)
    centre = SpherePoint.from_latlon(0.3, 1.0)
    cap_cells = np.flatnonzero(np.arccos(np.clip(fine.positions @ centre.array, -1.0, 1.0)) <= 0.4)
    exact = component_diameter(fine, cap_cells)
    thinned = component_diameter(fine, cap_cells, DiameterMode.subsampled)
    assert exact == pytest.approx(0.8, abs=2.0 * fine.spacing)
    assert exact - 2.0 * fine.spacing <= thinned <= exact


def test_component_diameter_size_cap(monkeypatch):
    monkeypatch.setattr(settings, "diameter_exact_cap", 10)
    grid = PlanarGrid.square(8.0, 8)
    with pytest.raises(SizeError):
        component_diameter(grid, np.arange(20))
    assert component_diameter(grid, np.arange(20), DiameterMode.subsampled) > 0.0


def test_level_sweep_is_nondecreasing():
    sample = sample_rsh(12, SphereGrid.global_grid(32), seed=9)
    sweep = level_sweep(sample, [-0.5, 0.0, 0.5, 1.0])
    assert all(a <= b for a, b in zip(sweep.fractions, sweep.fractions[1:]))
    with pytest.raises(DomainError):
        level_sweep(sample, [0.5, 0.0])


def test_events_at_extreme_levels():
    sample = _planar_sample(np.zeros(64 * 64))
    above = EventSpec(EventKind.ann_cross, 1.0, 2.0)
    assert event_occurs(sample, above)
    assert event_occurs(sample, EventSpec(EventKind.arm, 1.0, 2.0))
    assert event_occurs(sample, EventSpec(EventKind.ann_circ, 1.0, 2.0))
    assert not event_occurs(sample, EventSpec(EventKind.trunc_arm, 1.0, 2.0))
    for kind in (EventKind.ann_cross, EventKind.arm, EventKind.trunc_arm, EventKind.ann_circ):
        assert not event_occurs(sample, EventSpec(kind, -1.0, 2.0))


def test_blocking_circuit_stops_crossing():
    grid = PlanarGrid.square(16.0, 64)
    norm = np.max(np.abs(grid.local_coords), axis=1)
    ring = (norm >= 2.75) & (norm < 3.25)
    values = np.where(ring, 1.0, -1.0)
    mask = excursion_mask(_planar_sample(values), 0.0)
    assert np.any(mask.inside & (norm <= 2.0)) and np.any(mask.inside & (norm > 3.5))
    assert not ann_cross(mask, 2.0)
    assert ann_circ(mask, 2.0)
    ring_mask = mask.complement()
    assert ann_circ(ring_mask, 2.0)
    assert not ann_cross(ring_mask, 2.0)


def test_arm_and_truncated_arm_on_strips():
    grid = PlanarGrid.square(16.0, 64)
    xy = grid.local_coords
    c = xy[grid.center_cell]
    row = np.abs(xy[:, 1] - c[1]) < 1e-9

    def strip(end):
        return mask_from_cells(grid, row & (xy[:, 0] >= c[0]) & (xy[:, 0] <= end))

    assert arm(strip(5.0), 4.0)
    assert not arm(strip(5.0), 6.0)
    assert trunc_arm(strip(3.0), 1.0)
    assert not trunc_arm(strip(6.0), 1.0)
    assert not arm(mask_from_cells(grid, row & (xy[:, 0] > 1.0)), 4.0)


def test_event_window_errors():
    sample = _planar_sample(np.zeros(64 * 64))
    with pytest.raises(WindowError):
        event_occurs(sample, EventSpec(EventKind.ann_cross, 1.0, 5.0))
    with pytest.raises(WindowError):
        event_occurs(sample, EventSpec(EventKind.arm, 1.0, 20.0))
    with pytest.raises(DomainError):
        EventSpec(EventKind.arm, 0.0, -1.0)
    with pytest.raises(DomainError):
        EventSpec(EventKind.eu, 0.0, 0.1, delta=0.02)
    with pytest.raises(DomainError):
        EventSpec(EventKind.trunc_arm, 0.0, 1.0, window=1.5)


def test_spherical_events_use_the_north_pole():
    grid = SphereGrid(40, 80, colat_max=1.0)
    sample = _constant_sample(grid)
    assert event_occurs(sample, EventSpec(EventKind.ann_cross, 1.0, 0.2))
    assert not event_occurs(sample, EventSpec(EventKind.ann_cross, -1.0, 0.2))
    with pytest.raises(WindowError):
        event_occurs(sample, EventSpec(EventKind.ann_cross, 1.0, 0.4))


def test_events_are_monotone_in_level(monkeypatch):
    # EU runs on the coarse grid; monotonicity in t does not depend on the resolution
    monkeypatch.setattr(settings, "eu_min_cells_across", 0.01)
    grid = SphereGrid(60, 240, colat_max=1.2)
    levels = (-0.5, 0.0, 0.5, 1.0)
    kinds = (EventKind.ann_cross, EventKind.ann_circ, EventKind.arm, EventKind.eu)
    for rep in range(100):
        sample = sample_rsh(8, grid, seed=13, replicate=rep)
        for kind in kinds:
            hits = [event_occurs(sample, EventSpec(kind, t, 0.25)) for t in levels]
            assert hits == sorted(hits), (rep, kind)


@pytest.mark.slow
def test_giant_area_is_stable_under_grid_refinement():
    spec = KernelSpec.legendre(40)
    coarse = build_grid(settings.cells_per_scale, spec_scale(spec))
    fine = build_grid(2.0 * settings.cells_per_scale, spec_scale(spec))
    changes = []
    for rep in range(20):
        fractions = [
            giant_area_fraction(label_components(excursion_mask(sample_rsh(40, grid, seed=21, replicate=rep), 0.1)))
            for grid in (coarse, fine)
        ]
        changes.append(abs(fractions[1] - fractions[0]))
    assert float(np.mean(changes)) < 0.01


def test_eu_family_layout():
    family = eu_family(NORTH_POLE, 0.1)
    assert len(family) == 47
    assert sum(1 for name, _ in family if name.startswith("square")) == 8
    with pytest.raises(DomainError):
        eu_family(NORTH_POLE, 1.0)


def test_eu_event_on_hand_built_fields(monkeypatch):
    monkeypatch.setattr(settings, "eu_min_cells_across", 0.05)
    r, delta = 0.1, 0.01
    grid = eu_grid(NORTH_POLE, r, delta)
    sample = _constant_sample(grid, -1.0)
    assert eu_report(sample, NORTH_POLE, r, delta, 0.0).occurs
    assert not eu_report(sample, NORTH_POLE, r, delta, -2.0).occurs

    hole = np.full(grid.size, -1.0)
    hole[grid.center_cell] = 1.0
    assert eu_report(_constant_sample(grid).with_values(hole), NORTH_POLE, r, delta, 0.0).occurs

    blob = np.where(grid.center_distance < 0.025, 1.0, -1.0)
    report = eu_report(_constant_sample(grid).with_values(blob), NORTH_POLE, r, delta, 0.0, stop_early=False)
    assert not report.occurs
    assert report.failures
    assert report.regions == 47


def test_eu_event_at_default_resolution_is_paired_in_level():
    r, delta = 0.1, 0.01
    grid = eu_grid(NORTH_POLE, r, delta)
    assert grid.size <= settings.grid_max_cells
    assert grid.spacing <= delta * r / settings.eu_min_cells_across
    # a raised disc far wider than delta r is a hole until the level clears it
    values = np.where(grid.center_distance < 0.01, 1.0, 0.5)
    sample = _constant_sample(grid).with_values(values)
    hits = [eu_report(sample, NORTH_POLE, r, delta, t).occurs for t in (0.2, 0.6, 1.0)]
    assert hits == [False, False, True]


def test_eu_event_guards(monkeypatch):
    sample = _constant_sample(SphereGrid(20, 40, colat_max=0.5))
    with pytest.raises(ResolutionError):
        eu_report(sample, NORTH_POLE, 0.1, 0.01, 0.0)
    monkeypatch.setattr(settings, "eu_min_cells_across", 0.01)
    with pytest.raises(WindowError):
        eu_report(sample, NORTH_POLE, 0.2, 0.01, 0.0)
    with pytest.raises(DomainError):
        eu_report(_planar_sample(np.zeros(16)), NORTH_POLE, 0.1, 0.01, 0.0)
