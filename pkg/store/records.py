"""
CSV and JSON writers for replicate rows, estimates and run manifests.

Rows and estimates are RFC-4180 CSV with floats printed to full round-trip
precision; manifests and estimate dumps are indented JSON with sorted keys.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import csv
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from pydantic import BaseModel

from cli.responses import EstimateRecord, RunManifest
from config import CSV_ESTIMATE_FIELDS, CSV_ROW_FIELDS, settings
from custom_types.json import require_object
from engine.exceptions import StoreError
from engine.experiments import ReplicateRow

log = logging.getLogger(__name__)


def format_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return format(value, f".{settings.float_significant_digits}g")
    return str(value)


def metric_columns(rows: Iterable[ReplicateRow]) -> List[str]:
    names: set[str] = set()
    for row in rows:
        names.update(row.metrics)
    return sorted(names)


def _write_csv(path: Path, header: Sequence[str], lines: Iterable[Sequence[object]]) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for line in lines:
                writer.writerow([format_cell(v) for v in line])
    except OSError as exc:
        raise StoreError(str(exc), str(path)) from exc


def write_rows(path: Path, experiment: str, rows: Sequence[ReplicateRow]) -> int:
    columns = metric_columns(rows)
    _write_csv(
        path,
        list(CSV_ROW_FIELDS) + columns,
        (
            [experiment, row.replicate, row.level, row.scale] + [row.metrics.get(c) for c in columns]
            for row in rows
        ),
    )
    log.debug("wrote %d rows to %s", len(rows), path)
    return len(rows)


def write_estimates_csv(path: Path, records: Sequence[EstimateRecord]) -> None:
    _write_csv(
        path,
        CSV_ESTIMATE_FIELDS,
        ([getattr(rec, name) for name in CSV_ESTIMATE_FIELDS] for rec in records),
    )


def write_json(path: Path, payload: object) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n", encoding="utf-8")
    except (OSError, ValueError) as exc:
        raise StoreError(str(exc), str(path)) from exc


def write_estimates_json(path: Path, records: Sequence[EstimateRecord]) -> None:
    write_json(path, [rec.model_dump(mode="json") for rec in records])


def write_manifest(path: Path, manifest: RunManifest) -> None:
    write_json(path, manifest.model_dump(mode="json"))


def write_model(path: Path, model: BaseModel) -> None:
    write_json(path, model.model_dump(mode="json"))


def read_manifest(path: Path) -> RunManifest:
    try:
        doc = require_object(json.loads(path.read_text(encoding="utf-8")), "manifest")
    except FileNotFoundError as exc:
        raise StoreError("missing manifest", str(path)) from exc
    except (OSError, ValueError) as exc:
        raise StoreError(f"unreadable manifest: {exc}", str(path)) from exc
    return RunManifest.model_validate(doc)


def read_rows(path: Path) -> List[Dict[str, Optional[str]]]:
    """Raw CSV rows keyed by header, empty cells as None."""
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            return [{k: (v if v != "" else None) for k, v in row.items()} for row in csv.DictReader(fh)]
    except OSError as exc:
        raise StoreError(str(exc), str(path)) from exc
