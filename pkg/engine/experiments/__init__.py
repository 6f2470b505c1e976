"""
Monte Carlo campaigns: limit densities, giant areas, local uniqueness, couplings and rare events.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from engine.experiments.coupling import coupling_campaign, coupling_ladder, orthant_patch, polar_patch
from engine.experiments.densities import (
    arm_window,
    density_campaign,
    duality_campaign,
    duality_probe,
    estimate_phi,
    estimate_theta,
    level_order_check,
    stability_campaign,
    stability_probe,
)
from engine.experiments.giant_area import (
    concentration_campaign,
    concentration_experiment,
    giant_area_experiment,
    giant_campaign,
    giant_metrics,
    local_giant_fraction,
    monotone_sweeps,
    sphere_grid,
)
from engine.experiments.local_uniqueness import eu_campaign, eu_sweep, failure_table
from engine.experiments.models import Campaign, Estimate, ReplicateRow, Summary
from engine.experiments.rare_events import rare_event_campaign, rare_event_experiment, rare_metrics
from engine.experiments.stats import frequency, frequency_estimate, log_slope, one_sided_z

__all__ = [
    "Campaign",
    "Estimate",
    "ReplicateRow",
    "Summary",
    "arm_window",
    "concentration_campaign",
    "concentration_experiment",
    "coupling_campaign",
    "coupling_ladder",
    "density_campaign",
    "duality_campaign",
    "duality_probe",
    "estimate_phi",
    "estimate_theta",
    "eu_campaign",
    "eu_sweep",
    "failure_table",
    "frequency",
    "frequency_estimate",
    "giant_area_experiment",
    "giant_campaign",
    "giant_metrics",
    "level_order_check",
    "local_giant_fraction",
    "log_slope",
    "monotone_sweeps",
    "one_sided_z",
    "orthant_patch",
    "polar_patch",
    "rare_event_campaign",
    "rare_event_experiment",
    "rare_metrics",
    "sphere_grid",
    "stability_campaign",
    "stability_probe",
]
