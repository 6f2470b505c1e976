"""
Excursion sets, component labeling, giant components and percolation events.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from engine.excursion.events import (
    EventSpec,
    ann_circ,
    ann_cross,
    arm,
    event_occurs,
    square_cells,
    trunc_arm,
)
from engine.excursion.giant import (
    Giant,
    LevelSweep,
    component_diameter,
    diameter_bounds,
    giant,
    giant_area_fraction,
    giant_mask,
    largest_diameter,
    level_sweep,
)
from engine.excursion.labeling import Component, ComponentLabeling, DisjointSet, label_components
from engine.excursion.mask import ExcursionMask, excursion_mask, mask_from_cells
from engine.excursion.uniqueness import EU_LABEL, EUReport, eu_event, eu_family, eu_grid, eu_report

__all__ = [
    "EU_LABEL",
    "Component",
    "ComponentLabeling",
    "DisjointSet",
    "EUReport",
    "EventSpec",
    "ExcursionMask",
    "Giant",
    "LevelSweep",
    "ann_circ",
    "ann_cross",
    "arm",
    "component_diameter",
    "diameter_bounds",
    "eu_event",
    "eu_family",
    "eu_grid",
    "eu_report",
    "event_occurs",
    "excursion_mask",
    "giant",
    "giant_area_fraction",
    "giant_mask",
    "label_components",
    "largest_diameter",
    "level_sweep",
    "mask_from_cells",
    "square_cells",
    "trunc_arm",
]
