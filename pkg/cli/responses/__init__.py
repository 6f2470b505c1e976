"""
Response models for the command-line front end.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from .base import NpModel
from .estimates import EstimateRecord
from .reports import (
    KernelBoundRow,
    KernelCheckResponse,
    RunManifest,
    SampleResponse,
    TilingFailureRow,
    TilingResponse,
)

__all__ = [
    "EstimateRecord",
    "KernelBoundRow",
    "KernelCheckResponse",
    "NpModel",
    "RunManifest",
    "SampleResponse",
    "TilingFailureRow",
    "TilingResponse",
]
