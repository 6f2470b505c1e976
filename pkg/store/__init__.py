"""
Persistence of experiment outputs: run naming and record writers.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from store.keys import (
    ESTIMATES_CSV,
    ESTIMATES_JSON,
    MANIFEST_FILE,
    ROWS_FILE,
    digest,
    output_root,
    run_dir,
    sample_stem,
)
from store.records import (
    format_cell,
    metric_columns,
    read_manifest,
    read_rows,
    write_estimates_csv,
    write_estimates_json,
    write_json,
    write_manifest,
    write_model,
    write_rows,
)

__all__ = [
    "ESTIMATES_CSV",
    "ESTIMATES_JSON",
    "MANIFEST_FILE",
    "ROWS_FILE",
    "digest",
    "format_cell",
    "metric_columns",
    "output_root",
    "read_manifest",
    "read_rows",
    "run_dir",
    "sample_stem",
    "write_estimates_csv",
    "write_estimates_json",
    "write_json",
    "write_manifest",
    "write_model",
    "write_rows",
]
