"""
Run naming: config-hash digests, slugs and output locations.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Optional

from config import settings

ROWS_FILE = "rows.csv"
ESTIMATES_CSV = "estimates.csv"
ESTIMATES_JSON = "estimates.json"
MANIFEST_FILE = "manifest.json"
SLUG_LENGTH = 16


def digest(canonical: str) -> str:
    return hashlib.sha256(canonical.encode()).hexdigest()


def _slug(value: str) -> str:
    return value[:SLUG_LENGTH]


def output_root(out: Optional[str] = None) -> Path:
    if out:
        return Path(out)
    return Path(settings.output_dir or "runs")


def run_dir(experiment: str, config_hash: str, out: Optional[str] = None) -> Path:
    return output_root(out) / f"{experiment}-{_slug(config_hash)}"


def sample_stem(label: str, seed: int, replicate: int, out: Optional[str] = None) -> Path:
    return output_root(out) / "samples" / f"{label}-s{seed}-r{replicate}"
