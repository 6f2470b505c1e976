"""
Tests for YAML experiment configs, flag overrides, hashing and settings overrides.

Copyright (c) 2026 Stefan Kumarasinghe

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
"""

from __future__ import annotations

import json

import pytest

from config import settings
from engine.enums import EnsembleKind, ExperimentKind
from engine.exceptions import ConfigError
from services.config_service import config_service

GIANT_YAML = """\
experiment: giant
ensemble:
  kind: rsh
  ell: 8
levels: [-0.1, 0.1]
replicates: 2
seed: 4
"""


def test_resolve_reads_document() -> None:
    config = config_service.resolve(text=GIANT_YAML)
    assert config.experiment is ExperimentKind.giant
    assert config.ensemble.kind is EnsembleKind.rsh
    assert config.levels == [-0.1, 0.1]
    assert config.seed == 4


def test_flags_override_file_field_by_field() -> None:
    config = config_service.resolve(
        text=GIANT_YAML,
        overrides={"replicates": 5, "ensemble.ell": 16, "seed": None, "levels": [0.3]},
    )
    assert config.replicates == 5
    assert config.ensemble.ell == 16
    assert config.seed == 4
    assert config.levels == [0.3]


def test_config_from_file(tmp_path) -> None:
    path = tmp_path / "giant.yaml"
    path.write_text(GIANT_YAML)
    assert config_service.resolve(str(path)).replicates == 2
    with pytest.raises(ConfigError):
        config_service.resolve(str(tmp_path / "missing.yaml"))


def test_unknown_key_reports_field_and_line() -> None:
    with pytest.raises(ConfigError) as exc:
        config_service.resolve(text=GIANT_YAML + "bogus: 1\n")
    assert exc.value.field == "bogus"
    assert exc.value.line == 8


def test_nested_field_error_points_at_its_line() -> None:
    with pytest.raises(ConfigError) as exc:
        config_service.resolve(text=GIANT_YAML.replace("ell: 8", "ell: -1"))
    assert exc.value.field == "ensemble.ell"
    assert exc.value.line == 4


def test_wrong_type_reports_field() -> None:
    with pytest.raises(ConfigError) as exc:
        config_service.resolve(text=GIANT_YAML.replace("replicates: 2", "replicates: many"))
    assert exc.value.field == "replicates"
    assert exc.value.line == 6


def test_model_level_errors_point_at_the_section() -> None:
    text = GIANT_YAML.replace("kind: rsh", "kind: kostlan")
    with pytest.raises(ConfigError) as exc:
        config_service.resolve(text=text)
    assert exc.value.field == "ensemble"
    assert exc.value.line == 2
    assert "kostlan" in str(exc.value)


def test_experiment_requirements() -> None:
    with pytest.raises(ConfigError, match="radii"):
        config_service.resolve(text=GIANT_YAML.replace("experiment: giant", "experiment: eu"))
    with pytest.raises(ConfigError, match="planar"):
        config_service.resolve(text=GIANT_YAML.replace("experiment: giant", "experiment: theta"))


def test_invalid_yaml_and_non_mapping() -> None:
    with pytest.raises(ConfigError) as exc:
        config_service.resolve(text="experiment: giant\nlevels: [0.1\n")
    assert exc.value.line is not None
    with pytest.raises(ConfigError):
        config_service.resolve(text="- a\n- b\n")


def test_hash_ignores_output_dir_and_jobs() -> None:
    base = config_service.resolve(text=GIANT_YAML)
    other = config_service.resolve(text=GIANT_YAML, overrides={"jobs": 8, "output_dir": "/tmp/x"})
    reseeded = config_service.resolve(text=GIANT_YAML, overrides={"seed": 5})
    assert config_service.config_hash(base) == config_service.config_hash(other)
    assert config_service.config_hash(base) != config_service.config_hash(reseeded)
    assert len(config_service.config_hash(base)) == 64


def test_canonical_form_is_sorted_and_compact() -> None:
    canonical = config_service.canonical(config_service.resolve(text=GIANT_YAML))
    assert " " not in canonical
    doc = json.loads(canonical)
    assert "jobs" not in doc and "output_dir" not in doc
    assert canonical == json.dumps(doc, sort_keys=True, separators=(",", ":"))


def test_settings_overrides_validated() -> None:
    with pytest.raises(ConfigError) as exc:
        config_service.resolve(text=GIANT_YAML + "settings:\n  no_such_knob: 1\n")
    assert exc.value.field == "settings.no_such_knob"
    assert exc.value.line == 9
    with pytest.raises(ConfigError):
        config_service.resolve(text=GIANT_YAML + "settings:\n  grid_connectivity: hex\n")
    with pytest.raises(ConfigError):
        config_service.resolve(text=GIANT_YAML + "settings:\n  max_workers: 2\n")


@pytest.mark.asyncio
async def test_apply_settings_is_scoped() -> None:
    config = config_service.resolve(text=GIANT_YAML + "settings:\n  deviation_min_hits: 3\n")
    before = settings.deviation_min_hits
    async with config_service.apply_settings(config):
        assert settings.deviation_min_hits == 3
    assert settings.deviation_min_hits == before
