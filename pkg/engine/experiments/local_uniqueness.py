"""
Sweeps of the local existence-uniqueness failure frequency over a ladder of scales.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

from engine.enums import Connectivity, EstimandKind, ExperimentKind
from engine.exceptions import DomainError
from engine.excursion.uniqueness import EU_LABEL, eu_event, eu_grid
from engine.experiments.models import Campaign, Estimate, ReplicateRow, Summary
from engine.experiments.stats import frequency_estimate, group_rows, log_slope, metric, separated
from engine.fields.models import FieldSpec, PlanarSpec
from engine.fields.sampling import sample_field
from engine.geometry.grid import default_connectivity
from engine.geometry.sphere import NORTH_POLE, SpherePoint

log = logging.getLogger(__name__)

FAILURE = "eu_failure"


def eu_campaign(
    spec: FieldSpec,
    levels: Sequence[float],
    radii: Sequence[float],
    delta: float,
    seed: int = 0,
    center: SpherePoint = NORTH_POLE,
    connectivity: Optional[Connectivity] = None,
) -> Campaign:
    """Failure of EU at ``center`` for every (t, r); one patch grid per r, coefficients shared across r."""
    if isinstance(spec, PlanarSpec):
        raise DomainError("EU sweeps run on spherical ensembles")
    lv = [float(t) for t in levels]
    rs = [float(r) for r in radii]
    if not lv or not rs:
        raise DomainError("EU sweeps need at least one level and one radius")
    grids = {r: eu_grid(center, r, delta) for r in rs}
    conn = connectivity or default_connectivity()
    log.debug("EU sweep grids: %s", {f"{r:.4g}": g.size for r, g in grids.items()})

    def replicate(i: int) -> List[ReplicateRow]:
        rows = []
        for r in rs:
            sample = sample_field(spec, grids[r], seed, i)
            for t in lv:
                failed = not eu_event(sample, center, r, delta, t, conn)
                rows.append(ReplicateRow(i, t, r, {FAILURE: float(failed)}))
        return rows

    def summarize(rows: Sequence[ReplicateRow]) -> Summary:
        summary = Summary()
        table: Dict[Tuple[float, float], Estimate] = {}
        for (t, r), group in group_rows(rows).items():
            est = frequency_estimate(FAILURE, metric(group, FAILURE), t, r, censor=True)
            table[(float(t or 0.0), float(r or 0.0))] = est
            summary.estimates.append(est)
        for t in lv:
            ladder = sorted(r for (lvl, r) in table if lvl == t)
            kept = [table[(t, r)] for r in ladder if not table[(t, r)].censored]
            fit = log_slope([e.scale for e in kept], [e.value for e in kept])
            if fit is None:
                log.warning("%s at t=%g: fewer than two uncensored scales, no slope", EU_LABEL, t)
            else:
                summary.estimates.append(
                    Estimate("eu_log_slope", EstimandKind.slope, fit[0], fit[1], kept[0].replicates, t)
                )
            increases = [
                (a, b)
                for i, a in enumerate(ladder)
                for b in ladder[i + 1 :]
                if separated(table[(t, a)], table[(t, b)], 3.0)
            ]
            summary.check(f"nonincreasing_in_r[t={t:g}]", not increases)
        for r in rs:
            ordered = sorted(lv)
            summary.check(
                f"nonincreasing_in_t[r={r:g}]",
                all(not separated(table[(a, r)], table[(b, r)], 3.0) for a, b in zip(ordered, ordered[1:])),
            )
        return summary

    return Campaign(ExperimentKind.eu, replicate, summarize)


def eu_sweep(
    spec: FieldSpec,
    levels: Sequence[float],
    radii: Sequence[float],
    delta: float,
    replicates: int,
    seed: int = 0,
) -> Summary:
    """Table of empirical EU failure frequencies, slopes of log frequency against r, and ordering checks."""
    if replicates < 1 or not all(math.isfinite(r) for r in radii):
        raise DomainError("EU sweep needs at least one replicate and finite radii")
    return eu_campaign(spec, levels, radii, delta, seed).run(replicates)[1]


def failure_table(summary: Summary) -> Dict[Tuple[float, float], float]:
    """(t, r) -> failure frequency, censored entries included as their bound."""
    return {
        (float(e.level or 0.0), float(e.scale or 0.0)): e.value for e in summary.named(FAILURE)
    }

