"""
Flat binary export of field samples with a JSON sidecar.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Tuple

import numpy as np

from custom_types.json import JSONDict, require_object
from engine.exceptions import DomainError, StoreError
from engine.fields.models import FieldSample, spec_document, spec_from_document
from engine.geometry.grid import grid_from_descriptor

log = logging.getLogger(__name__)

DTYPE = "<f8"


def sample_paths(stem: Path) -> Tuple[Path, Path, Path]:
    base = stem.parent
    return base / f"{stem.name}.f64", base / f"{stem.name}.json", base / f"{stem.name}.coeffs.f64"


def sidecar(sample: FieldSample) -> JSONDict:
    return {
        "spec": spec_document(sample.spec),
        "seed": sample.seed,
        "replicate": sample.replicate,
        "grid": sample.grid.descriptor(),
        "dtype": DTYPE,
        "shape": [sample.grid.rows, sample.grid.cols],
        "coefficient_count": int(sample.coeffs.size),
    }


def write_sample(sample: FieldSample, stem: Path) -> Tuple[Path, Path]:
    data_path, meta_path, coeff_path = sample_paths(stem)
    try:
        stem.parent.mkdir(parents=True, exist_ok=True)
        data_path.write_bytes(sample.values.astype(DTYPE).tobytes())
        coeff_path.write_bytes(sample.coeffs.astype(DTYPE).tobytes())
        meta_path.write_text(json.dumps(sidecar(sample), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise StoreError(str(exc), str(stem)) from exc
    log.debug("wrote %s (%d cells)", data_path, sample.values.size)
    return data_path, meta_path


def read_sample(stem: Path) -> FieldSample:
    data_path, meta_path, coeff_path = sample_paths(stem)
    try:
        meta = require_object(json.loads(meta_path.read_text(encoding="utf-8")), "sidecar")
        values = np.frombuffer(data_path.read_bytes(), dtype=DTYPE).astype(float)
        coeffs = np.frombuffer(coeff_path.read_bytes(), dtype=DTYPE).astype(float) if coeff_path.exists() else np.empty(0)
    except FileNotFoundError as exc:
        raise StoreError("missing sample file", str(exc.filename)) from exc
    except (OSError, ValueError) as exc:
        raise StoreError(f"unreadable sample: {exc}", str(meta_path)) from exc
    try:
        grid = grid_from_descriptor(require_object(meta["grid"], "grid"))
        spec = spec_from_document(require_object(meta["spec"], "spec"))
        if meta.get("dtype") != DTYPE:
            raise DomainError(f"unsupported dtype {meta.get('dtype')!r}")
        return FieldSample(grid, values, coeffs, spec, int(meta["seed"]), int(meta.get("replicate", 0)))  # type: ignore[arg-type]
    except (KeyError, TypeError, ValueError, DomainError) as exc:
        raise StoreError(f"malformed sidecar: {exc}", str(meta_path)) from exc
