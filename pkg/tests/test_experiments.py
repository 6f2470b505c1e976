"""
Test cases for Monte Carlo campaigns: estimators, censoring, densities, giants, EU sweeps, coupling ladders and rare events.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

import math

import numpy as np
import pytest

from config import RENDER_COLORS, settings
from engine.enums import EstimandKind, ExperimentKind, Palette
from engine.exceptions import ConsistencyError, DomainError, WindowError
from engine.experiments import (
    Campaign,
    Estimate,
    ReplicateRow,
    Summary,
    arm_window,
    concentration_campaign,
    coupling_campaign,
    density_campaign,
    duality_probe,
    estimate_phi,
    estimate_theta,
    eu_campaign,
    failure_table,
    frequency,
    frequency_estimate,
    giant_area_experiment,
    giant_campaign,
    level_order_check,
    local_giant_fraction,
    log_slope,
    monotone_sweeps,
    one_sided_z,
    rare_event_campaign,
    sphere_grid,
    stability_probe,
)
from engine.experiments.rare_events import equator_row
from engine.experiments.stats import mean_and_se, paired_decrease, variance_estimate
from engine.fields import PlanarSpec, sample_field
from engine.fields.models import FieldSample
from engine.geometry import SphereGrid
from engine.render import render_pixels, write_ppm
from engine.spectral import KernelSpec


def _constant_sample(grid, value):
    return FieldSample(grid, np.full(grid.size, value), np.zeros(0), KernelSpec.legendre(8), seed=0)


def test_frequency_and_standard_error():
    p, se = frequency([1, 0, 1, 1])
    assert p == 0.75
    assert se == pytest.approx(math.sqrt(0.75 * 0.25 / 4))
    with pytest.raises(DomainError):
        frequency([])


def test_censoring_reports_the_upper_bound():
    rare = np.zeros(100)
    rare[:2] = 1.0
    est = frequency_estimate("rare", rare, censor=True)
    assert est.censored
    assert est.value == pytest.approx(settings.deviation_min_hits / 100)

    common = np.zeros(100)
    common[:7] = 1.0
    est = frequency_estimate("common", common, censor=True)
    assert not est.censored
    assert est.value == pytest.approx(0.07)
    assert est.standard_error == pytest.approx(math.sqrt(0.07 * 0.93 / 100))


def test_mean_variance_and_contrasts():
    assert mean_and_se([2.0]) == (2.0, 0.0)
    mean, se = mean_and_se([1.0, 2.0, 3.0])
    assert mean == 2.0 and se == pytest.approx(1.0 / math.sqrt(3.0))
    assert variance_estimate("v", [1.0, 3.0]).value == pytest.approx(2.0)
    assert one_sided_z([0.0, 0.0], [1.0, 1.0]) == math.inf
    assert one_sided_z([0.1, 0.2, 0.3], [0.6, 0.7, 0.8]) > 5.0
    assert paired_decrease([3.0, 4.0, 5.0], [1.0, 2.0, 3.1], 2.0)
    assert not paired_decrease([1.0, 1.0], [1.0, 1.0], 2.0)


def test_log_slope_recovers_exponential_decay():
    x = np.array([0.1, 0.2, 0.4, 0.8])
    slope, stderr = log_slope(x, np.exp(-2.0 * x))
    assert slope == pytest.approx(-2.0)
    assert stderr == pytest.approx(0.0, abs=1e-9)
    assert log_slope([0.1, 0.2], [0.0, 0.5]) is None


def test_estimate_range_validation():
    with pytest.raises(ConsistencyError):
        Estimate("p", EstimandKind.probability, 1.2, 0.0, 10)
    with pytest.raises(ConsistencyError):
        Estimate("a", EstimandKind.area, 20.0, 0.0, 10)
    with pytest.raises(ConsistencyError):
        Estimate("p", EstimandKind.probability, 0.5, 0.1, 0)
    assert Estimate("s", EstimandKind.slope, -3.0, 0.1, 5).value == -3.0


def test_campaign_runs_replicates_in_order():
    def replicate(i):
        return [ReplicateRow(i, 0.0, None, {"x": float(i)}), ReplicateRow(i, 1.0, None, {"x": float(2 * i)})]

    def summarize(rows):
        return Summary([Estimate("n", EstimandKind.mean, float(len(rows)), 0.0, 1)])

    rows, summary = Campaign(ExperimentKind.theta, replicate, summarize).run(3)
    assert [r.replicate for r in rows] == [0, 0, 1, 1, 2, 2]
    assert [r.level for r in rows[:2]] == [0.0, 1.0]
    assert summary.find("n").value == 6.0
    with pytest.raises(KeyError):
        summary.find("missing")
    with pytest.raises(DomainError):
        Campaign(ExperimentKind.theta, replicate, summarize).run(0)


def test_arm_window_bounds():
    assert arm_window(10.0) == 22.0
    assert arm_window(3.0, 9.0) == 9.0
    with pytest.raises(WindowError):
        arm_window(10.0, 15.0)
    with pytest.raises(DomainError):
        arm_window(0.0)


def test_theta_estimates_are_monotone_in_level():
    summary = estimate_theta([-3.0, 0.5, 3.0], radius=3.0, waves=64, replicates=20, seed=1, correction=True)
    assert summary.checks["arm_monotone_in_level"]
    values = [summary.find("theta", level=t).value for t in (-3.0, 0.5, 3.0)]
    assert values == sorted(values)
    for t in (-3.0, 0.5, 3.0):
        est = summary.find("theta", level=t)
        assert 0.0 <= est.value <= 1.0
        assert est.replicates == 20
        assert est.standard_error == pytest.approx(math.sqrt(est.value * (1.0 - est.value) / 20))
        assert summary.find("theta_trunc_corrected", level=t).value <= est.value


def test_density_campaign_is_deterministic():
    spec = PlanarSpec.plane_wave(1.0, waves=64)
    first, _ = density_campaign(spec, [0.0, 1.0], radius=2.0, seed=5, name="phi").run(4)
    second, _ = density_campaign(spec, [0.0, 1.0], radius=2.0, seed=5, name="phi").run(4)
    assert [(r.replicate, r.level, r.metrics) for r in first] == [(r.replicate, r.level, r.metrics) for r in second]
    assert [r.level for r in first[:2]] == [0.0, 1.0]


def test_phi_summary_has_one_estimate_per_level():
    summary = estimate_phi([1.0, -1.0], alpha=0.5, radius=2.0, waves=64, replicates=6, seed=2)
    assert [e.level for e in summary.named("phi")] == [1.0, -1.0]
    assert not summary.named("phi_trunc_corrected")


def test_level_order_check_uses_pooled_errors():
    s = Summary(
        [
            Estimate("theta", EstimandKind.probability, 0.2, 0.01, 100, 0.3),
            Estimate("theta", EstimandKind.probability, 0.6, 0.01, 100, 1.0),
            Estimate("theta", EstimandKind.probability, 0.61, 0.01, 100, 3.0),
        ]
    )
    assert not level_order_check(s, "theta")
    s.estimates.pop()
    assert level_order_check(s, "theta")


def test_duality_probe_reports_both_sides():
    summary = duality_probe(PlanarSpec.bargmann_fock(64), 0.5, 1.5, replicates=10, seed=3)
    circ = summary.find("ann_circ")
    other = summary.find("one_minus_ann_cross")
    assert 0.0 <= circ.value <= 1.0 and 0.0 <= other.value <= 1.0
    assert "duality_within_3se" in summary.checks


def test_stability_probe_is_nested():
    summary = stability_probe(PlanarSpec.bargmann_fock(64), 0.5, 2.0, [0.05, 0.2, 0.5], replicates=12, seed=4)
    assert summary.checks["nested_as_eps_decreases"]
    values = [summary.find("arm_instability", scale=e).value for e in (0.05, 0.2, 0.5)]
    assert values == sorted(values)
    with pytest.raises(DomainError):
        stability_probe(PlanarSpec.bargmann_fock(64), 0.5, 2.0, [0.0], replicates=1)


def test_giant_campaign_rows_and_monotone_coupling():
    spec = KernelSpec.legendre(8)
    rows, summary = giant_area_experiment(spec, [0.5, -0.5, 0.0, 1.0], replicates=4, seed=11)
    assert len(rows) == 16
    assert [r.level for r in rows[:4]] == [0.5, -0.5, 0.0, 1.0]
    assert summary.checks["monotone_per_replicate"]
    for t in (-0.5, 0.0, 0.5, 1.0):
        a = summary.find("giant_area_a", level=t)
        assert a.kind is EstimandKind.area_fraction
        assert 0.0 <= a.value <= 1.0
        assert 0.0 <= summary.find("giants_coincide", level=t).value <= 1.0
        assert summary.find("giant_area_d", level=t).value <= a.value + 1e-12
    assert summary.find("giant_area_z[from=0.5]", level=1.0).kind is EstimandKind.statistic
    censored = [e for e in summary.estimates if e.name.startswith("giant_deviation")]
    assert censored and all(e.censored for e in censored)


def test_monotone_sweeps_per_replicate():
    sweeps = monotone_sweeps(KernelSpec.legendre(8), [1.0, -0.5, 0.0, 0.5], replicates=4, seed=2)
    for fractions in sweeps:
        assert all(b >= a for a, b in zip(fractions, fractions[1:]))


def test_local_giant_fraction_limits():
    grid = SphereGrid(40, 80, colat_max=1.0)
    assert local_giant_fraction(_constant_sample(grid, -1.0), 0.2, 0.0) == pytest.approx(1.0)
    assert local_giant_fraction(_constant_sample(grid, 1.0), 0.2, 0.0) == 0.0
    with pytest.raises(WindowError):
        local_giant_fraction(_constant_sample(grid, -1.0), 0.8, 0.0)


def test_concentration_campaign_censors_small_samples():
    rows, summary = concentration_campaign(KernelSpec.legendre(8), 0.5, [2.0, 4.0], seed=3).run(3)
    assert len(rows) == 6
    for u in (2.0, 4.0):
        assert 0.0 <= summary.find("local_giant_fraction", scale=u).value <= 1.0
    excess = [e for e in summary.estimates if e.name.startswith("local_excess")]
    assert excess and all(e.censored and e.value == 1.0 for e in excess)


def test_eu_campaign_extreme_levels(monkeypatch):
    monkeypatch.setattr(settings, "eu_min_cells_across", 0.05)
    campaign = eu_campaign(KernelSpec.legendre(16), [-10.0, 10.0], [0.08, 0.1], 0.01, seed=1)
    rows, summary = campaign.run(6)
    assert len(rows) == 24
    table = failure_table(summary)
    assert table[(-10.0, 0.08)] == 1.0 and table[(-10.0, 0.1)] == 1.0
    assert summary.find("eu_failure", level=10.0, scale=0.1).censored
    assert summary.find("eu_log_slope", level=-10.0).value == pytest.approx(0.0, abs=1e-12)
    assert all(summary.checks.values())


def test_eu_campaign_rejects_planar_fields():
    with pytest.raises(DomainError):
        eu_campaign(PlanarSpec.bargmann_fock(), [0.0], [0.1], 0.01)


def test_kostlan_coupling_ladder_structure():
    rows, summary = coupling_campaign(KernelSpec.kostlan(16), [0.3, 0.6, 1.2], seed=2).run(4)
    assert len(rows) == 12
    assert all(r.level is None for r in rows)
    analytic = [summary.find("analytic_variance", scale=r).value for r in (0.3, 0.6, 1.2)]
    assert analytic[0] >= analytic[1] >= analytic[2] >= 0.0
    assert "strictly_decreasing" in summary.checks
    assert summary.named("difference_variance")
    assert not summary.named("scaled_variance")


def test_zonal_coupling_ladder_reports_scaled_variance():
    rows, summary = coupling_campaign(KernelSpec.bandlimited(0.5, 16), [0.5, 1.0], seed=1).run(3)
    assert len(rows) == 6
    for r in (0.5, 1.0):
        var = summary.find("difference_variance", scale=r)
        scaled = summary.find("scaled_variance", scale=r)
        assert scaled.value == pytest.approx(var.value * r * 16)


def test_rare_events_at_extreme_levels():
    spec = KernelSpec.legendre(8)
    _, summary = rare_event_campaign(spec, [10.0, -10.0], seed=1, epsilon=0.1).run(5)
    assert summary.find("all_sphere", level=10.0).value == 1.0
    assert summary.find("blocked_loop", level=-10.0).value == 1.0
    assert summary.find("small_giant", level=-10.0).value == 1.0
    assert summary.find("blocked_loop", level=10.0).censored
    assert summary.find("small_giant", level=10.0).censored
    assert summary.find("all_sphere", level=-10.0).censored


def test_equator_row_needs_whole_sphere():
    assert equator_row(SphereGrid.global_grid(10)) in (4, 5)
    with pytest.raises(DomainError):
        equator_row(SphereGrid(10, 40, colat_max=1.0))


@pytest.mark.slow
def test_density_levels_and_limits():
    summary = estimate_theta([-1.0, 0.3, 1.0, 3.0], radius=10.0, replicates=2000, seed=7)
    assert level_order_check(Summary([summary.find("theta", level=t) for t in (0.3, 1.0, 3.0)]), "theta")
    assert summary.find("theta", level=-1.0).value < 0.05
    assert estimate_phi([3.0], alpha=1.0, radius=10.0, replicates=500, seed=8).find("phi").value > 0.8


@pytest.mark.slow
def test_figure_one_contrast(tmp_path):
    spec = KernelSpec.legendre(40)
    _, summary = giant_campaign(spec, [-0.1, 0.1], seed=40).run(200)
    assert summary.find("giant_area_z[from=-0.1]", level=0.1).value >= 5.0
    sample = sample_field(spec, sphere_grid(spec), 40, 0)
    below, above = (render_pixels(sample, [t], Palette.binary) for t in (-0.1, 0.1))
    assert below.shape == above.shape == (256, 512, 3)
    assert not np.array_equal(below, above)
    dark = np.array(RENDER_COLORS["dark"], dtype=np.uint8)
    dark_below, dark_above = np.all(below == dark, axis=-1), np.all(above == dark, axis=-1)
    assert np.all(dark_above[dark_below])
    assert dark_above.sum() > dark_below.sum()
    for name, image in (("below.ppm", below), ("above.ppm", above)):
        assert write_ppm(tmp_path / name, image).stat().st_size > 256 * 512 * 3


def _failures(rows, level, scale):
    return sum(row.metrics["eu_failure"] for row in rows if row.level == level and row.scale == scale)


@pytest.mark.slow
def test_eu_sweep_paired_levels_at_default_resolution():
    r = 20.0 / 64.0
    rows, summary = eu_campaign(KernelSpec.legendre(64), [0.2, 0.3, 0.6, 1.0], [r], 0.01, seed=64).run(200)
    assert len(rows) == 800
    assert _failures(rows, 1.0, r) < _failures(rows, 0.2, r)
    assert _failures(rows, 0.3, r) >= _failures(rows, 0.6, r)
    assert summary.checks[f"nonincreasing_in_t[r={r:g}]"]


@pytest.mark.slow
def test_eu_sweep_kostlan_scale_ladder():
    # r = 16/sqrt(n) lies beyond the largest EU radius, so the ladder stops at 8/sqrt(n)
    radii = [4.0 / 16.0, 8.0 / 16.0]
    rows, summary = eu_campaign(KernelSpec.kostlan(256), [0.5], radii, 0.01, seed=256).run(50)
    assert _failures(rows, 0.5, radii[0]) >= _failures(rows, 0.5, radii[1])
    assert summary.checks["nonincreasing_in_r[t=0.5]"]
    for slope in summary.named("eu_log_slope"):
        assert slope.value <= 0.0


@pytest.mark.slow
def test_monotone_coupling_campaign():
    sweeps = monotone_sweeps(KernelSpec.legendre(40), [-0.5, 0.0, 0.5, 1.0], replicates=50, seed=10)
    for fractions in sweeps:
        assert all(b >= a for a, b in zip(fractions, fractions[1:]))


@pytest.mark.slow
def test_coupling_error_monotone_ladders():
    kostlan = coupling_campaign(KernelSpec.kostlan(64), [0.15, 0.3, 0.6], seed=5).run(200)[1]
    assert kostlan.checks["strictly_decreasing"]
    zonal = coupling_campaign(KernelSpec.bandlimited(0.0, 64), [8 / 64, 16 / 64, 32 / 64], seed=6).run(200)[1]
    assert zonal.checks["strictly_decreasing"]


@pytest.mark.slow
def test_giant_matches_planar_density():
    phi = estimate_phi([1.0], alpha=1.0, radius=10.0, replicates=1000, seed=9).find("phi").value
    _, summary = giant_campaign(KernelSpec.legendre(64), [1.0], seed=12).run(100)
    assert abs(summary.find("giant_area_a", level=1.0).value - phi) <= 0.05
