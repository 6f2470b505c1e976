"""
Finite-range couplings of the spherical ensembles and their error diagnostics.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from engine.finite_range.bump import SLOPE_BOUND, bump_derivative, bump_eval, bump_values, cutoff, scaled_bump
from engine.finite_range.diagnostics import coupling_sup_stats, difference_variance, threshold_ladder
from engine.finite_range.kostlan import (
    basis_localization_report,
    check_orthant,
    kostlan_coupled,
    kostlan_coupling_variance,
    localization_points,
    orthant_samples,
    support_audit,
    truncation_mask,
)
from engine.finite_range.models import CoupledPair, LocalizationReport, SupStats, SupportAudit, ZonalTruncation
from engine.finite_range.zonal import residual_kernel, truncate_zonal, zonal_truncated_pair

__all__ = [
    "SLOPE_BOUND",
    "CoupledPair",
    "LocalizationReport",
    "SupStats",
    "SupportAudit",
    "ZonalTruncation",
    "basis_localization_report",
    "bump_derivative",
    "bump_eval",
    "bump_values",
    "check_orthant",
    "coupling_sup_stats",
    "cutoff",
    "difference_variance",
    "kostlan_coupled",
    "kostlan_coupling_variance",
    "localization_points",
    "orthant_samples",
    "residual_kernel",
    "scaled_bump",
    "support_audit",
    "threshold_ladder",
    "truncate_zonal",
    "truncation_mask",
    "zonal_truncated_pair",
]
