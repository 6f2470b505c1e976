"""
JSON value aliases, type guards and coercion helpers for sidecars, manifests and canonical config hashing.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping, Sequence
from enum import Enum
from typing import TYPE_CHECKING, TypeAlias, TypeGuard

import numpy as np
from typing_extensions import TypeAliasType

JSONScalar: TypeAlias = str | int | float | bool | None
if TYPE_CHECKING:
    JSONValue: TypeAlias = JSONScalar | Mapping[str, "JSONValue"] | Sequence["JSONValue"]
else:
    JSONValue = TypeAliasType(
        "JSONValue",
        JSONScalar | Mapping[str, "JSONValue"] | Sequence["JSONValue"],
    )
JSONDict: TypeAlias = dict[str, JSONValue]
JSONList: TypeAlias = list[JSONValue]


def is_json_value(value: object) -> TypeGuard[JSONValue]:
    if value is None or isinstance(value, (str, int, float, bool)):
        return True
    if isinstance(value, Mapping):
        return all(isinstance(key, str) and is_json_value(item) for key, item in value.items())
    if isinstance(value, Sequence) and not isinstance(value, (str, bytes, bytearray)):
        return all(is_json_value(item) for item in value)
    return False


def is_json_object(value: object) -> TypeGuard[JSONDict]:
    return isinstance(value, dict) and all(
        isinstance(key, str) and is_json_value(item) for key, item in value.items()
    )


def to_json_value(value: object) -> JSONValue:
    """Coerce numpy scalars and arrays, enums and tuples into plain JSON values."""
    if isinstance(value, Enum):
        return to_json_value(value.value)
    if isinstance(value, np.ndarray):
        return [to_json_value(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Mapping):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    raise TypeError(f"value of type {type(value).__name__} is not JSON serializable")


def finite_or_none(value: float) -> float | None:
    return float(value) if math.isfinite(value) else None


def canonical_dumps(value: object) -> str:
    """Key-sorted, whitespace-free JSON text used for hashing."""
    return json.dumps(to_json_value(value), sort_keys=True, separators=(",", ":"), allow_nan=False)


def require_object(value: object, what: str) -> JSONDict:
    if not is_json_object(value):
        raise ValueError(f"{what} must be a JSON object")
    return value


__all__ = [
    "JSONScalar",
    "JSONValue",
    "JSONDict",
    "JSONList",
    "canonical_dumps",
    "finite_or_none",
    "is_json_value",
    "is_json_object",
    "require_object",
    "to_json_value",
]
