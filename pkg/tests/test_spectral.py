"""
Test cases for the spectral engine: Legendre and Jacobi recurrences, ensemble kernels, the Christoffel-Darboux cross-check, zonal coefficients and decay bound reports.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

import math

import numpy as np
import pytest
from scipy import special

from engine.enums import EnsembleKind
from engine.exceptions import BoundViolationError, ConsistencyError, DomainError
from engine.spectral import (
    KernelSpec,
    ZonalCoefficients,
    bandlimited_kernel,
    bandlimited_kernel_values,
    compensated_sum,
    default_bound_grid,
    empirical_constant_ladder,
    jacobi_p10,
    jacobi_p10_values,
    kernel_bound_report,
    kernel_coefficients,
    kernel_values,
    kostlan_kernel,
    kostlan_kernel_values,
    legendre_p,
    legendre_table,
    legendre_values,
)
from engine.spectral.kernels import christoffel_darboux_sum, window_legendre_sum


def test_legendre_closed_forms():
    assert legendre_p(0, 0.3) == 1.0
    assert legendre_p(7, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert legendre_p(2, 0.0) == -0.5
    assert legendre_p(3, 0.5) == pytest.approx((5 * 0.125 - 3 * 0.5) / 2)


def test_legendre_bounded_by_one_up_to_degree_512():
    xs = np.linspace(-1.0, 1.0, 201)
    table = legendre_table(512, xs)
    assert table.shape == (513, 201)
    assert np.max(np.abs(table)) <= 1.0 + 1e-12


def test_legendre_matches_scipy():
    xs = np.linspace(-1.0, 1.0, 41)
    for ell in (1, 5, 40, 300):
        assert np.allclose(legendre_values(ell, xs), special.eval_legendre(ell, xs), atol=1e-12)


def test_legendre_rejects_out_of_domain_argument():
    with pytest.raises(DomainError):
        legendre_p(3, 1.0 + 1e-9)
    with pytest.raises(DomainError):
        legendre_p(-1, 0.0)
    assert legendre_p(3, 1.0 + 1e-13) == pytest.approx(1.0)


def test_jacobi_closed_forms_and_scipy():
    assert jacobi_p10(0, 0.4) == 1.0
    assert jacobi_p10(1, 0.0) == 0.5
    assert jacobi_p10(1, 1.0) == 2.0
    assert jacobi_p10(9, 1.0) == pytest.approx(10.0)
    xs = np.linspace(-1.0, 1.0, 33)
    for ell in (2, 7, 64):
        assert np.allclose(jacobi_p10_values(ell, xs), special.eval_jacobi(ell, 1.0, 0.0, xs), rtol=1e-10, atol=1e-10)
    with pytest.raises(DomainError):
        jacobi_p10(2, -1.5)


def test_christoffel_darboux_against_direct_sum():
    xs = np.cos(np.linspace(0.0, math.pi, 200))
    for ell in (1, 8, 64, 256):
        spec = KernelSpec.bandlimited(0.0, ell)
        direct = window_legendre_sum(spec, xs)
        closed = (ell + 1) / (4 * math.pi) * jacobi_p10_values(ell, xs)
        assert np.all(np.abs(direct - closed) <= 1e-9 * np.maximum(1.0, np.abs(direct)))


@pytest.mark.parametrize("alpha", [0.0, 0.5])
@pytest.mark.parametrize("ell", [1, 8, 64, 256])
def test_bandlimited_kernel_forms_agree(alpha, ell):
    spec = KernelSpec.bandlimited(alpha, ell)
    thetas = np.linspace(0.0, math.pi, 200)
    x = np.cos(thetas)
    c2 = spec.normalizing_constant_sq
    direct = c2 * window_legendre_sum(spec, x)
    closed = c2 * christoffel_darboux_sum(spec, x)
    assert np.all(np.abs(direct - closed) <= 1e-9 * np.maximum(1.0, np.abs(direct)))
    assert np.array_equal(bandlimited_kernel_values(spec, thetas), closed)


def test_bandlimited_kernel_is_one_at_zero():
    specs = [
        KernelSpec.bandlimited(0.0, 1),
        KernelSpec.bandlimited(0.5, 128),
        KernelSpec.bandlimited(1.0, 40),
        KernelSpec.mono(0.5, 100),
        KernelSpec.mono(0.3, 17),
    ]
    for spec in specs:
        assert bandlimited_kernel(spec, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_bandlimited_degree_one_closed_form():
    spec = KernelSpec.bandlimited(0.0, 1)
    c2 = 4 * math.pi / 4
    for theta in (0.2, 1.0, 2.5):
        x = math.cos(theta)
        assert bandlimited_kernel(spec, theta) == pytest.approx((1 + 3 * x) / (4 * math.pi) * c2, abs=1e-14)


def test_bandlimited_kernel_matches_independent_sum():
    spec = KernelSpec.bandlimited(0.5, 128)
    x = math.cos(0.3)
    lo, hi = spec.window
    assert (lo, hi) == (64, 128)
    terms = [(2 * k + 1) / (4 * math.pi) * float(special.eval_legendre(k, x)) for k in range(lo, hi + 1)]
    expected = spec.normalizing_constant_sq * math.fsum(terms)
    assert bandlimited_kernel(spec, 0.3) == pytest.approx(expected, abs=1e-12)


def test_bandlimited_consistency_error_on_negative_tolerance():
    spec = KernelSpec.bandlimited(0.5, 64)
    with pytest.raises(ConsistencyError):
        bandlimited_kernel_values(spec, np.linspace(0.1, 3.0, 50), rtol=-1.0)


def test_bandlimited_rejects_other_kinds():
    with pytest.raises(DomainError):
        bandlimited_kernel(KernelSpec.kostlan(4), 0.1)


def test_kernel_spec_validation_and_windows():
    with pytest.raises(DomainError):
        KernelSpec.kostlan(0)
    with pytest.raises(DomainError):
        KernelSpec.bandlimited(1.5, 10)
    with pytest.raises(DomainError):
        KernelSpec.mono(1.0, 10)
    with pytest.raises(DomainError):
        KernelSpec(EnsembleKind.bargmann_fock, 1)
    assert KernelSpec.mono(0.5, 100).window == (90, 100)
    assert KernelSpec.bandlimited(1.0, 40).window == (40, 40)
    assert KernelSpec.bandlimited(0.29, 100).window == (29, 100)
    assert KernelSpec.legendre(12).window == (12, 12)
    assert KernelSpec.bandlimited(0.5, 10).window_exponent == 1.0
    assert KernelSpec.mono(0.4, 10).window_exponent == 0.4


def test_kostlan_kernel_values():
    assert kostlan_kernel(10, 0.0) == 1.0
    assert kostlan_kernel(2, math.pi / 2) == 0.0
    value = kostlan_kernel(64, 0.5)
    assert value == pytest.approx(math.cos(0.5) ** 64, rel=1e-12)
    assert abs(value) <= math.exp(-0.25 * 64 / 4)
    assert kostlan_kernel(3, math.pi) == pytest.approx(-1.0)
    assert kostlan_kernel(3000, 1.5) >= 0.0
    with pytest.raises(DomainError):
        kostlan_kernel(2, 4.0)


@pytest.mark.parametrize("n", [1, 2, 7, 64, 255])
def test_kostlan_kernel_reflection_symmetry(n):
    thetas = np.linspace(0.0, math.pi, 101)
    direct = kostlan_kernel_values(n, thetas)
    reflected = kostlan_kernel_values(n, math.pi - thetas)
    nonzero = np.abs(direct) > 1e-12
    sign = -1.0 if n % 2 else 1.0
    assert np.array_equal(np.sign(reflected[nonzero]), sign * np.sign(direct[nonzero]))
    assert np.allclose(np.abs(reflected), np.abs(direct), rtol=1e-13, atol=1e-15)


def test_compensated_sum_recovers_cancellation():
    terms = np.array([[1e16], [1.0], [-1e16], [1.0]])
    assert compensated_sum(terms)[0] == 2.0


def test_kernel_coefficients_sum_to_one():
    specs = [
        KernelSpec.legendre(17),
        KernelSpec.bandlimited(0.5, 64),
        KernelSpec.mono(0.5, 100),
        KernelSpec.kostlan(1),
        KernelSpec.kostlan(40),
    ]
    for spec in specs:
        coeffs = kernel_coefficients(spec)
        assert coeffs.variance == pytest.approx(1.0, abs=1e-10)


def test_kostlan_coefficients_reproduce_kernel():
    spec = KernelSpec.kostlan(12)
    coeffs = kernel_coefficients(spec)
    assert np.all(coeffs.c[1::2] == 0.0)
    thetas = np.linspace(0.0, math.pi, 37)
    assert np.allclose(coeffs.kernel_values(thetas), kostlan_kernel_values(12, thetas), atol=1e-12)


def test_zonal_coefficients_kernel_matches_bandlimited():
    spec = KernelSpec.bandlimited(0.0, 8)
    coeffs = kernel_coefficients(spec)
    thetas = np.linspace(0.0, math.pi, 25)
    assert np.allclose(coeffs.kernel_values(thetas), kernel_values(spec, thetas), atol=1e-12)


def test_zonal_coefficients_validation():
    with pytest.raises(DomainError):
        ZonalCoefficients(np.array([1.0, np.nan]))
    single = ZonalCoefficients.single(3)
    assert single.lmax == 3
    assert single.variance == 1.0
    assert single.smoothness == 9.0
    assert single.zonal_values([0.0])[0] == pytest.approx(math.sqrt(7 / (4 * math.pi)))


def test_kostlan_bound_passes_for_powers_of_two():
    thetas = np.linspace(math.pi / 200, math.pi / 2, 100)
    for k in range(1, 10):
        report = kernel_bound_report(KernelSpec.kostlan(2**k), thetas)
        assert report.passed
        assert report.explicit
        assert report.empirical_constant <= 1.0


def test_kostlan_bound_degree_one_near_zero():
    report = kernel_bound_report(KernelSpec.kostlan(1), [1e-6, 1e-3, 0.5, math.pi / 2])
    assert report.passed


def test_kostlan_bound_violation_raises(monkeypatch):
    import engine.spectral.bounds as bounds

    def tight_rate(spec, thetas):
        return np.full_like(thetas, 1e-300), "tiny"

    monkeypatch.setattr(bounds, "decay_rate", tight_rate)
    with pytest.raises(BoundViolationError):
        bounds.kernel_bound_report(KernelSpec.kostlan(4), [0.1, 0.2])


def test_legendre_empirical_constants_are_comparable():
    grid = default_bound_grid(400)
    low, high = empirical_constant_ladder(EnsembleKind.rsh, [64, 256], grid)
    assert not low.explicit
    ratio = low.empirical_constant / high.empirical_constant
    assert 0.5 <= ratio <= 2.0


def test_bound_grid_domain():
    with pytest.raises(DomainError):
        kernel_bound_report(KernelSpec.legendre(4), [0.0, 0.5])
    with pytest.raises(DomainError):
        kernel_bound_report(KernelSpec.legendre(4), [2.0])
    report = kernel_bound_report(KernelSpec.mono(0.5, 64), default_bound_grid(50))
    assert report.rate.startswith("theta^-3/2")
    assert report.points == 50
