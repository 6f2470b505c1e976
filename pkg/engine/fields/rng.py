"""
Counter-based random streams: every (seed, replicate, stream) triple owns an independent Philox key.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np

from engine.exceptions import DomainError

_MASK64 = (1 << 64) - 1


class Stream(IntEnum):
    coefficients = 0
    waves = 1
    events = 2
    checks = 3


def stream_key(seed: int, replicate: int = 0, stream: int = Stream.coefficients) -> np.ndarray:
    if seed < 0 or replicate < 0:
        raise DomainError("seed and replicate index must be nonnegative")
    if not 0 <= stream < 256:
        raise DomainError(f"stream id must lie in [0, 256), got {stream}")
    return np.array([seed & _MASK64, ((replicate << 8) | int(stream)) & _MASK64], dtype=np.uint64)


def replicate_rng(seed: int, replicate: int = 0, stream: int = Stream.coefficients) -> np.random.Generator:
    """Generator for one replicate; independent of scheduling and worker count."""
    return np.random.Generator(np.random.Philox(key=stream_key(seed, replicate, stream)))
