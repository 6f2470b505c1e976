"""
Sub-command handlers and their argument parsers.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from . import experiments, kernel, render, sample, tiling
from .exception import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, handle_exceptions

REGISTRARS = (sample.register, render.register, experiments.register, kernel.register, tiling.register)

__all__ = [
    "EXIT_OK",
    "EXIT_RUNTIME",
    "EXIT_USAGE",
    "REGISTRARS",
    "handle_exceptions",
]
