"""
Test cases for field samplers: random streams, normalized Legendre functions, harmonic synthesis, Kostlan and planar samplers, and sample export.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

import json
import math

import numpy as np
import pytest
from scipy import integrate, special

from config import FOUR_PI, settings
from engine.exceptions import BudgetError, DomainError, StoreError
from engine.fields import (
    PlanarSpec,
    WaveSuperposition,
    associated_legendre,
    coefficient_count,
    draw_coefficients,
    kostlan_basis_chunks,
    kostlan_multi_indices,
    kostlan_size,
    read_sample,
    real_harmonics,
    replicate_rng,
    sample_bandlimited,
    sample_isotropic,
    sample_kostlan,
    sample_planar,
    sample_rsh,
    synthesize_points,
    write_sample,
)
from engine.geometry import NORTH_POLE, PatchGrid, PlanarGrid, SphereGrid
from engine.spectral import KernelSpec, ZonalCoefficients, kernel_coefficients, kernel_values


def _unit_points(rng, count):
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _colat_lon(points):
    return np.arccos(np.clip(points[:, 2], -1, 1)), np.arctan2(points[:, 1], points[:, 0])


def _synthesis_matrix(weights, points):
    """Rows: points; columns: the field's response to each unit Gaussian coefficient."""
    colat, lon = _colat_lon(points)
    count = coefficient_count(len(weights) - 1)
    basis = np.empty((len(points), count))
    for k in range(count):
        unit = np.zeros(count)
        unit[k] = 1.0
        basis[:, k] = synthesize_points(weights, unit, colat, lon)
    return basis


def test_streams_are_reproducible_and_independent():
    a = replicate_rng(7, 3).standard_normal(5)
    b = replicate_rng(7, 3).standard_normal(5)
    c = replicate_rng(7, 4).standard_normal(5)
    d = replicate_rng(7, 3, stream=1).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.allclose(a, c)
    assert not np.allclose(a, d)
    with pytest.raises(DomainError):
        replicate_rng(-1)


def test_associated_legendre_matches_scipy():
    xs = np.linspace(-0.95, 0.95, 15)
    for ell in (0, 3, 10, 25):
        ours = associated_legendre(ell, xs)
        for m in range(ell + 1):
            ref = (-1) ** m * special.lpmv(m, ell, xs)
            assert np.allclose(ours[m], ref, rtol=1e-9, atol=1e-12)


def test_unnormalized_legendre_guard(monkeypatch):
    monkeypatch.setattr(settings, "rsh_unnormalized_max_degree", 10)
    with pytest.raises(BudgetError):
        associated_legendre(11, [0.3])


def test_addition_formula_degree_40():
    rng = np.random.default_rng(1)
    colat, lon = _colat_lon(_unit_points(rng, 100))
    y = real_harmonics(40, colat, lon)
    total = FOUR_PI / 81.0 * np.sum(y * y, axis=0)
    assert np.max(np.abs(total - 1.0)) < 1e-9


def test_addition_formula_high_degree_stays_finite():
    colat = np.array([1e-3, 0.5, math.pi / 2, math.pi - 1e-3])
    y = real_harmonics(512, colat, np.zeros(4))
    assert np.all(np.isfinite(y))
    assert np.allclose(FOUR_PI / 1025.0 * np.sum(y * y, axis=0), 1.0, atol=1e-9)


@pytest.mark.parametrize(
    "spec",
    [KernelSpec.legendre(16), KernelSpec.bandlimited(0.0, 8), KernelSpec.bandlimited(0.5, 12), KernelSpec.mono(0.5, 20)],
)
def test_isotropic_synthesis_has_exact_kernel(spec):
    rng = np.random.default_rng(5)
    pts = _unit_points(rng, 24)
    basis = _synthesis_matrix(kernel_coefficients(spec).c, pts)
    cov = basis @ basis.T
    theta = np.arctan2(np.linalg.norm(np.cross(pts[:, None, :], pts[None, :, :]), axis=-1), pts @ pts.T)
    expected = kernel_values(spec, theta.ravel()).reshape(theta.shape)
    assert np.max(np.abs(cov - expected)) < 1e-10
    assert np.allclose(np.diag(cov), 1.0, atol=1e-12)


def test_rsh_degree_zero_is_constant():
    grid = SphereGrid(6, 12)
    sample = sample_rsh(0, grid, seed=3)
    assert sample.coeffs.size == 1
    assert np.allclose(sample.values, sample.coeffs[0], atol=1e-14)


def test_row_and_point_synthesis_agree():
    grid = SphereGrid(12, 24)
    sample = sample_rsh(9, grid, seed=11, replicate=2)
    colat, lon = _colat_lon(grid.positions)
    direct = synthesize_points(kernel_coefficients(KernelSpec.legendre(9)).c, sample.coeffs, colat, lon)
    assert np.allclose(sample.values, direct, atol=1e-11)


def test_samples_reproducible_bit_for_bit():
    grid = SphereGrid(10, 20)
    a = sample_rsh(12, grid, seed=42, replicate=5)
    b = sample_rsh(12, grid, seed=42, replicate=5)
    c = sample_rsh(12, grid, seed=42, replicate=6)
    assert a.values.tobytes() == b.values.tobytes()
    assert not np.allclose(a.values, c.values)
    assert a.grid_ref == grid.identity


def test_bandlimited_width_one_equals_rsh():
    grid = SphereGrid(8, 16)
    bl = sample_bandlimited(KernelSpec.bandlimited(1.0, 7), grid, seed=9)
    rsh = sample_rsh(7, grid, seed=9)
    assert np.allclose(bl.values, rsh.values, atol=1e-12)
    with pytest.raises(DomainError):
        sample_bandlimited(KernelSpec.kostlan(4), grid, seed=9)


def test_isotropic_zero_and_two_term_coefficients():
    grid = PatchGrid.square(NORTH_POLE, 0.5, 5)
    zero = sample_isotropic(ZonalCoefficients(np.zeros(4)), grid, seed=1)
    assert np.all(zero.values == 0.0)
    coeffs = ZonalCoefficients(np.array([1.0, 1.0]) / math.sqrt(2.0))
    rng = np.random.default_rng(2)
    pts = _unit_points(rng, 10)
    basis = _synthesis_matrix(coeffs.c, pts)
    cov = basis @ basis.T
    assert np.allclose(cov, 0.5 * (1.0 + pts @ pts.T), atol=1e-12)


def test_rsh_degree_one_monte_carlo_covariance():
    pts = np.array([NORTH_POLE.array, [math.sin(0.7), 0.0, math.cos(0.7)]])
    colat, lon = _colat_lon(pts)
    weights = kernel_coefficients(KernelSpec.legendre(1)).c
    draws = 3000
    vals = np.array([synthesize_points(weights, draw_coefficients(4, 13, r), colat, lon) for r in range(draws)])
    prod = vals[:, 0] * vals[:, 1]
    se = prod.std(ddof=1) / math.sqrt(draws)
    assert abs(prod.mean() - math.cos(0.7)) < 4 * se


def test_kostlan_indices_and_degree_one():
    idx = kostlan_multi_indices(3)
    assert idx.shape == (kostlan_size(3), 3)
    assert np.all(idx.sum(axis=1) == 3)
    assert tuple(idx[0]) == (3, 0, 0)
    grid = PatchGrid.square(NORTH_POLE, 0.4, 4)
    sample = sample_kostlan(1, grid, seed=5)
    assert np.allclose(sample.values, grid.positions @ sample.coeffs, atol=1e-15)


def test_kostlan_analytic_variance_and_kernel():
    rng = np.random.default_rng(4)
    pts = _unit_points(rng, 20)
    for n in (1, 8, 32, 64):
        basis = np.vstack([b for _, b in kostlan_basis_chunks(n, pts)])
        assert np.allclose(np.sum(basis * basis, axis=1), 1.0, atol=1e-9)
        assert np.allclose(basis @ basis.T, (pts @ pts.T) ** n, atol=1e-12)


def test_kostlan_forced_zero_and_budget(monkeypatch):
    grid = SphereGrid(4, 8)
    zero = sample_kostlan(6, grid, seed=1, coeffs=np.zeros(kostlan_size(6)))
    assert np.all(zero.values == 0.0)
    with pytest.raises(DomainError):
        sample_kostlan(6, grid, seed=1, coeffs=np.zeros(3))
    monkeypatch.setattr(settings, "kostlan_max_degree", 10)
    with pytest.raises(BudgetError):
        sample_kostlan(12, grid, seed=1)


def test_spherical_sampler_rejects_planar_grid():
    with pytest.raises(DomainError):
        sample_rsh(3, PlanarGrid(4, 4), seed=1)
    with pytest.raises(DomainError):
        sample_planar(PlanarSpec.bargmann_fock(), SphereGrid(4, 8), seed=1)


def test_planar_spec_validation_and_kernels():
    with pytest.raises(DomainError):
        PlanarSpec.plane_wave(1.5)
    with pytest.raises(DomainError):
        PlanarSpec.bargmann_fock(waves=10)
    bf = PlanarSpec.bargmann_fock()
    assert float(bf.kernel(1.0)) == pytest.approx(math.exp(-0.5))
    assert abs(float(PlanarSpec.plane_wave(1.0).kernel(2.404825557695773))) < 1e-12
    spec = PlanarSpec.plane_wave(0.5)
    assert float(spec.kernel(0.0)) == 1.0
    d = 1.7
    ref, _ = integrate.quad(lambda rho: special.j0(rho * d) * rho, 0.5, 1.0)
    assert float(spec.kernel(d)) == pytest.approx(2.0 / 0.75 * ref, rel=1e-9)


def test_single_wave_hook_is_a_sinusoid():
    grid = PlanarGrid.square(6.0, 12)
    waves = WaveSuperposition(np.array([[1.0, 0.0]]), np.array([math.pi / 2]))
    sample = sample_planar(PlanarSpec.plane_wave(1.0), grid, seed=0, waves=waves)
    x = grid.positions[:, 0]
    assert np.allclose(sample.values, -math.sqrt(2.0) * np.sin(x), atol=1e-12)
    again = WaveSuperposition.unpack(sample.coeffs)
    assert again.K == 1 and again.phases[0] == pytest.approx(math.pi / 2)


def test_plane_wave_frequencies_follow_spectral_measure():
    rng = replicate_rng(3, 0, 1)
    ring = WaveSuperposition.draw(PlanarSpec.plane_wave(1.0), rng)
    assert np.allclose(np.linalg.norm(ring.frequencies, axis=1), 1.0)
    annulus = WaveSuperposition.draw(PlanarSpec.plane_wave(0.6, waves=256), rng)
    radius = np.linalg.norm(annulus.frequencies, axis=1)
    assert annulus.K == 256
    assert radius.min() >= 0.6 and radius.max() <= 1.0
    assert np.all((ring.phases >= 0) & (ring.phases < 2 * math.pi))


@pytest.mark.parametrize("spec,distance,target", [
    (PlanarSpec.bargmann_fock(waves=64), 1.0, math.exp(-0.5)),
    (PlanarSpec.plane_wave(1.0, waves=64), 2.404825557695773, 0.0),
])
def test_planar_monte_carlo_covariance(spec, distance, target):
    grid = PlanarGrid(1, 2, side_length=2.0 * distance)
    draws = 3000
    prods = np.empty(draws)
    for r in range(draws):
        vals = sample_planar(spec, grid, seed=17, replicate=r).values
        prods[r] = vals[0] * vals[1]
    se = prods.std(ddof=1) / math.sqrt(draws)
    assert abs(prods.mean() - target) < 4 * se


def test_sample_export_round_trip(tmp_path):
    grid = SphereGrid(6, 12)
    sample = sample_rsh(5, grid, seed=8, replicate=1)
    data_path, meta_path = write_sample(sample, tmp_path / "rsh5")
    assert data_path.stat().st_size == 8 * grid.size
    meta = json.loads(meta_path.read_text())
    assert meta["spec"]["ensemble"] == "rsh" and meta["spec"]["degree"] == 5
    assert meta["shape"] == [6, 12]
    again = read_sample(tmp_path / "rsh5")
    assert again.values.tobytes() == sample.values.tobytes()
    assert np.array_equal(again.coeffs, sample.coeffs)
    assert again.grid.identity == grid.identity
    assert again.spec == sample.spec and again.seed == 8 and again.replicate == 1


def test_sample_export_errors(tmp_path):
    with pytest.raises(StoreError):
        read_sample(tmp_path / "missing")
    sample = sample_planar(PlanarSpec.bargmann_fock(), PlanarGrid(3, 3), seed=1)
    _, meta_path = write_sample(sample, tmp_path / "bf")
    meta_path.write_text(json.dumps({"spec": {"ensemble": "nope"}, "grid": {}, "seed": 1}))
    with pytest.raises(StoreError):
        read_sample(tmp_path / "bf")
