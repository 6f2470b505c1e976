"""
Experiment configuration: YAML documents, flag overrides, canonical hashing and
scoped settings overrides.

A config file is a YAML mapping validated by :class:`cli.requests.ExperimentConfig`.
Flags override file values field by field using dotted keys (``ensemble.ell``).
Validation failures are reported with the dotted field path and, when the key
appears in the document, its line number.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import asyncio
import copy
import logging
from contextlib import asynccontextmanager
from pathlib import Path
from typing import AsyncIterator, Dict, Mapping, Optional, Tuple

import yaml
from pydantic import ValidationError

from cli.requests import UNHASHED_FIELDS, ExperimentConfig
from config import Settings, settings
from custom_types.json import canonical_dumps
from engine.exceptions import ConfigError
from store.keys import digest

log = logging.getLogger(__name__)

LineMap = Dict[Tuple[str, ...], int]

_NON_OVERRIDABLE_SETTINGS = {"output_dir", "max_workers"}


def _line_map(node: Optional[yaml.Node], prefix: Tuple[str, ...] = ()) -> LineMap:
    lines: LineMap = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = prefix + (str(key_node.value),)
            lines[path] = key_node.start_mark.line + 1
            lines.update(_line_map(value_node, path))
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            path = prefix + (str(i),)
            lines[path] = item.start_mark.line + 1
            lines.update(_line_map(item, path))
    return lines


def _set_dotted(doc: Dict[str, object], key: str, value: object) -> None:
    parts = key.split(".")
    target = doc
    for part in parts[:-1]:
        child = target.get(part)
        if not isinstance(child, dict):
            child = {}
            target[part] = child
        target = child
    target[parts[-1]] = value


def _locate(loc: Tuple[object, ...], lines: LineMap) -> Tuple[Optional[str], Optional[int]]:
    path = tuple(str(p) for p in loc)
    field = ".".join(path) or None
    while path:
        if path in lines:
            return field, lines[path]
        path = path[:-1]
    return field, None


def _validation_error(exc: ValidationError, lines: LineMap) -> ConfigError:
    first = exc.errors()[0]
    field, line = _locate(tuple(first.get("loc", ())), lines)
    message = str(first.get("msg", "invalid value"))
    if len(exc.errors()) > 1:
        message += f" (and {len(exc.errors()) - 1} more)"
    return ConfigError(message, field, line)


def _normalize_settings_overrides(raw: Mapping[str, object], lines: LineMap) -> Dict[str, object]:
    known = set(settings.model_dump()) - _NON_OVERRIDABLE_SETTINGS
    unknown = sorted(set(raw) - known)
    if unknown:
        key = ("settings", unknown[0])
        raise ConfigError(f"unknown setting override(s): {', '.join(unknown)}", f"settings.{unknown[0]}", lines.get(key))
    baseline = settings.model_dump()
    baseline.update(raw)
    try:
        validated = Settings.model_validate(baseline)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ("settings",) + tuple(str(p) for p in first.get("loc", ()))
        field, line = _locate(loc, lines)
        raise ConfigError(str(first.get("msg", "invalid value")), field, line) from exc
    return {key: copy.deepcopy(getattr(validated, key)) for key in raw}


class ConfigService:
    def __init__(self) -> None:
        self._runtime_lock = asyncio.Lock()

    @staticmethod
    def parse_document(text: str) -> Tuple[Dict[str, object], LineMap]:
        try:
            node = yaml.compose(text, Loader=yaml.SafeLoader)
            loaded = yaml.safe_load(text)
        except yaml.MarkedYAMLError as exc:
            mark = exc.problem_mark or exc.context_mark
            raise ConfigError(f"invalid YAML: {exc.problem or exc}", None, mark.line + 1 if mark else None) from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML: {exc}") from exc
        if loaded is None:
            return {}, {}
        if not isinstance(loaded, dict):
            raise ConfigError("config document must be a mapping", None, 1)
        return {str(k): v for k, v in loaded.items()}, _line_map(node)

    def load_document(self, path: Path) -> Tuple[Dict[str, object], LineMap]:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        return self.parse_document(text)

    def resolve(
        self,
        path: Optional[str] = None,
        overrides: Optional[Mapping[str, object]] = None,
        text: Optional[str] = None,
    ) -> ExperimentConfig:
        """Merge the file (or ``text``) with non-None flag overrides and validate."""
        doc: Dict[str, object] = {}
        lines: LineMap = {}
        if text is not None:
            doc, lines = self.parse_document(text)
        elif path:
            doc, lines = self.load_document(Path(path))
        for key, value in (overrides or {}).items():
            if value is not None:
                _set_dotted(doc, key, value)
        try:
            config = ExperimentConfig.model_validate(doc)
        except ValidationError as exc:
            raise _validation_error(exc, lines) from exc
        if config.settings:
            normalized = _normalize_settings_overrides(config.settings, lines)
            config = config.model_copy(update={"settings": normalized})
        return config

    @staticmethod
    def canonical(config: ExperimentConfig) -> str:
        return canonical_dumps(config.model_dump(mode="json", exclude=UNHASHED_FIELDS))

    def config_hash(self, config: ExperimentConfig) -> str:
        return digest(self.canonical(config))

    @asynccontextmanager
    async def apply_settings(self, config: ExperimentConfig) -> AsyncIterator[None]:
        """Swap in the config's settings overrides for the duration of one run."""
        if not config.settings:
            yield
            return
        async with self._runtime_lock:
            original = {key: copy.deepcopy(getattr(settings, key)) for key in config.settings}
            try:
                for key, value in config.settings.items():
                    setattr(settings, key, copy.deepcopy(value))
                log.info("settings overrides active: %s", sorted(config.settings))
                yield
            finally:
                for key, value in original.items():
                    setattr(settings, key, value)


config_service = ConfigService()
