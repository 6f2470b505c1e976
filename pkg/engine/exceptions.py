"""
Exception hierarchy for simulation, configuration and persistence failures.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from typing import Optional


class SimulationError(Exception):
    pass


class DomainError(SimulationError):
    pass


class AntipodalPointError(DomainError):
    pass


class ConsistencyError(SimulationError):
    pass


class BoundViolationError(SimulationError):
    pass


class ResolutionError(SimulationError):
    pass


class BudgetError(SimulationError):
    pass


class InfeasibleTilingError(SimulationError):
    pass


class OrthantViolationError(SimulationError):
    pass


class QuadratureError(SimulationError):
    pass


class EmptyMaskError(SimulationError):
    pass


class WindowError(SimulationError):
    pass


class SizeError(SimulationError):
    pass


class PositivityError(SimulationError):
    pass


class ConfigError(Exception):
    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None) -> None:
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class StoreError(Exception):
    def __init__(self, message: str, path: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")
