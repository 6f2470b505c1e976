"""
Experiment orchestration: campaign dispatch, concurrent replicates, ordered
aggregation and persistence of rows, estimates and the run manifest.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import asyncio
import logging
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from cli.requests import UNHASHED_FIELDS, ExperimentConfig
from cli.responses import EstimateRecord, RunManifest
from config import CODE_VERSION, settings
from custom_types.json import require_object
from engine.enums import ExperimentKind
from engine.exceptions import DomainError
from engine.experiments import (
    Campaign,
    ReplicateRow,
    Summary,
    concentration_campaign,
    coupling_campaign,
    density_campaign,
    duality_campaign,
    eu_campaign,
    giant_campaign,
    rare_event_campaign,
    stability_campaign,
)
from engine.fields import PlanarSpec
from engine.spectral import KernelSpec
from services.config_service import config_service
from store.keys import ESTIMATES_CSV, ESTIMATES_JSON, MANIFEST_FILE, ROWS_FILE, run_dir
from store.records import write_estimates_csv, write_estimates_json, write_manifest, write_rows

log = logging.getLogger(__name__)

ReplicateOutcome = Union[List[ReplicateRow], BaseException]


@dataclass(frozen=True)
class RunResult:
    path: Path
    manifest: RunManifest
    rows: List[ReplicateRow]
    records: List[EstimateRecord]
    summary: Summary


def _planar(config: ExperimentConfig) -> PlanarSpec:
    spec = config.ensemble.to_spec()
    if not isinstance(spec, PlanarSpec):
        raise DomainError(f"the {config.experiment.value} experiment needs a planar field")
    return spec


def _kernel(config: ExperimentConfig) -> KernelSpec:
    spec = config.ensemble.to_spec()
    if not isinstance(spec, KernelSpec):
        raise DomainError(f"the {config.experiment.value} experiment needs a spherical ensemble")
    return spec


def _density(c: ExperimentConfig) -> Campaign:
    return density_campaign(
        _planar(c), c.levels, c.radius, c.window, c.seed, c.experiment.value, c.correction, c.connectivity
    )


def _duality(c: ExperimentConfig) -> Campaign:
    return duality_campaign(_planar(c), c.levels[0], float(c.radius or 0.0), c.seed, c.connectivity)


def _stability(c: ExperimentConfig) -> Campaign:
    return stability_campaign(_planar(c), c.levels[0], float(c.radius or 0.0), c.epsilons, c.seed, c.connectivity)


def _giant(c: ExperimentConfig) -> Campaign:
    return giant_campaign(_kernel(c), c.levels, c.seed, c.resolution, c.epsilons, c.reference, c.connectivity)


def _concentration(c: ExperimentConfig) -> Campaign:
    return concentration_campaign(
        _kernel(c), c.levels[0], c.sizes, c.seed, c.resolution, c.epsilons, c.reference, c.connectivity
    )


def _eu(c: ExperimentConfig) -> Campaign:
    return eu_campaign(_kernel(c), c.levels, c.radii, c.delta, c.seed, connectivity=c.connectivity)


def _coupling(c: ExperimentConfig) -> Campaign:
    return coupling_campaign(_kernel(c), c.radii, c.seed)


def _rare(c: ExperimentConfig) -> Campaign:
    return rare_event_campaign(_kernel(c), c.levels, c.seed, c.giant_fraction, c.resolution, c.connectivity)


_FACTORIES: Dict[ExperimentKind, Callable[[ExperimentConfig], Campaign]] = {
    ExperimentKind.theta: _density,
    ExperimentKind.phi: _density,
    ExperimentKind.duality: _duality,
    ExperimentKind.stability: _stability,
    ExperimentKind.giant: _giant,
    ExperimentKind.concentration: _concentration,
    ExperimentKind.eu: _eu,
    ExperimentKind.coupling: _coupling,
    ExperimentKind.rare: _rare,
}


def build_campaign(config: ExperimentConfig) -> Campaign:
    return _FACTORIES[config.experiment](config)


async def run_replicates(campaign: Campaign, replicates: int, jobs: int) -> List[ReplicateOutcome]:
    """Run every replicate on a worker thread; outcomes come back in replicate order."""
    semaphore = asyncio.Semaphore(max(1, jobs))

    async def _one(i: int) -> List[ReplicateRow]:
        async with semaphore:
            started = time.perf_counter()
            rows = await asyncio.to_thread(campaign.replicate, i)
            log.debug("replicate %d: %d rows in %.3fs", i, len(rows), time.perf_counter() - started)
            return rows

    return list(await asyncio.gather(*(_one(i) for i in range(replicates)), return_exceptions=True))


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


async def run_experiment(
    config: ExperimentConfig,
    out: Optional[str] = None,
    jobs: Optional[int] = None,
) -> RunResult:
    """Run ``config`` and persist its outputs; failures leave an incomplete manifest and re-raise."""
    if jobs is None:
        jobs = config.jobs
    if jobs is None:
        jobs = settings.max_workers
    config_hash = config_service.config_hash(config)
    path = run_dir(config.experiment.value, config_hash, out or config.output_dir)
    manifest = RunManifest(
        experiment=config.experiment,
        config_hash=config_hash,
        config=require_object(config.model_dump(mode="json", exclude=UNHASHED_FIELDS), "config"),
        code_version=CODE_VERSION,
        started_at=_utcnow(),
        replicates=config.replicates,
        workers=jobs,
    )
    write_manifest(path / MANIFEST_FILE, manifest)
    started = time.perf_counter()
    log.info(
        "experiment %s hash=%s replicates=%d workers=%d -> %s",
        config.experiment.value,
        config_hash[:16],
        config.replicates,
        jobs,
        path,
    )
    rows: List[ReplicateRow] = []
    try:
        async with config_service.apply_settings(config):
            campaign = build_campaign(config)
            outcomes = await run_replicates(campaign, config.replicates, jobs)
            failures = [(i, o) for i, o in enumerate(outcomes) if isinstance(o, BaseException)]
            for outcome in outcomes:
                if not isinstance(outcome, BaseException):
                    rows.extend(outcome)
            manifest.completed_replicates = len(outcomes) - len(failures)
            manifest.row_count = write_rows(path / ROWS_FILE, config.experiment.value, rows)
            manifest.files = [ROWS_FILE]
            for i, err in failures:
                log.warning("replicate %d failed: %s", i, err)
            if failures:
                raise failures[0][1]
            summary = campaign.summarize(rows)
        records = [EstimateRecord.from_estimate(e, config.seed, config_hash) for e in summary.estimates]
        write_estimates_csv(path / ESTIMATES_CSV, records)
        write_estimates_json(path / ESTIMATES_JSON, records)
    except Exception as exc:
        manifest.complete = False
        manifest.error = f"{type(exc).__name__}: {exc}"
        manifest.wall_time_seconds = time.perf_counter() - started
        write_manifest(path / MANIFEST_FILE, manifest)
        log.warning("experiment %s incomplete: %s", config.experiment.value, manifest.error)
        raise
    manifest.complete = True
    manifest.estimate_count = len(records)
    manifest.checks = dict(summary.checks)
    manifest.files = [ROWS_FILE, ESTIMATES_CSV, ESTIMATES_JSON, MANIFEST_FILE]
    manifest.wall_time_seconds = time.perf_counter() - started
    write_manifest(path / MANIFEST_FILE, manifest)
    log.info(
        "experiment %s done: %d rows, %d estimates in %.2fs",
        config.experiment.value,
        manifest.row_count,
        manifest.estimate_count,
        manifest.wall_time_seconds,
    )
    return RunResult(path, manifest, rows, records, summary)


def run_experiment_sync(config: ExperimentConfig, out: Optional[str] = None, jobs: Optional[int] = None) -> RunResult:
    return asyncio.run(run_experiment(config, out, jobs))
