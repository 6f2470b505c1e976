"""
Orthogonal polynomials, ensemble covariance kernels and kernel decay checks.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from engine.spectral.bounds import KernelBoundReport, default_bound_grid, empirical_constant_ladder, kernel_bound_report
from engine.spectral.kernels import (
    KernelSpec,
    ZonalCoefficients,
    bandlimited_kernel,
    bandlimited_kernel_values,
    compensated_sum,
    kernel_coefficients,
    kernel_values,
    kostlan_kernel,
    kostlan_kernel_values,
)
from engine.spectral.polynomials import jacobi_p10, jacobi_p10_values, legendre_p, legendre_table, legendre_values

__all__ = [
    "KernelBoundReport",
    "KernelSpec",
    "ZonalCoefficients",
    "bandlimited_kernel",
    "bandlimited_kernel_values",
    "compensated_sum",
    "default_bound_grid",
    "empirical_constant_ladder",
    "jacobi_p10",
    "jacobi_p10_values",
    "kernel_bound_report",
    "kernel_coefficients",
    "kernel_values",
    "kostlan_kernel",
    "kostlan_kernel_values",
    "legendre_p",
    "legendre_table",
    "legendre_values",
]
