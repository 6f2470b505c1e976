"""
Centralized exception handling decorator for command handlers.

:func:`handle_exceptions` wraps a sub-command handler and turns failures into
process exit codes: configuration and validation problems exit with ``2``,
simulation and storage failures with ``3``.  The message is logged, never the
traceback, unless debug logging is on.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import inspect
import logging
from functools import wraps
from typing import Awaitable, Callable, TypeVar, cast

from pydantic import ValidationError

from engine.exceptions import ConfigError, SimulationError, StoreError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3

F = TypeVar("F", bound=Callable[..., int])


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, (ConfigError, ValidationError)):
        return EXIT_USAGE
    return EXIT_RUNTIME


def _report(exc: Exception) -> int:
    code = exit_code(exc)
    if code == EXIT_USAGE:
        log.error("invalid configuration: %s", exc)
    else:
        log.error("%s: %s", type(exc).__name__, exc)
    log.debug("command failed", exc_info=exc)
    return code


def handle_exceptions(func: F) -> F:

    if inspect.iscoroutinefunction(func):
        async_func = cast(Callable[..., Awaitable[int]], func)

        @wraps(func)
        async def async_wrapper(*args: object, **kwargs: object) -> int:
            try:
                return await async_func(*args, **kwargs)
            except (ConfigError, ValidationError, SimulationError, StoreError) as exc:
                return _report(exc)

        return cast(F, async_wrapper)

    sync_func = cast(Callable[..., int], func)

    @wraps(func)
    def sync_wrapper(*args: object, **kwargs: object) -> int:
        try:
            return sync_func(*args, **kwargs)
        except (ConfigError, ValidationError, SimulationError, StoreError) as exc:
            return _report(exc)

    return cast(F, sync_wrapper)
