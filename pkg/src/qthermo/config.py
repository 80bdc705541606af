"""Experiment configuration parsing: key = value text or JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    out_dir: str = "."


def _parse_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"value {raw!r} is not valid (use JSON literals: numbers, "
            f"strings in quotes, [lists], true/false)") from exc


def parse_config_text(text: str) -> dict:
    """key = value format with a [params] section for experiment parameters."""
    data: dict = {"params": {}}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            if section != "params":
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        value = _parse_value(raw.strip())
        if section == "params":
            data["params"][key] = value
        else:
            data[key] = value
    return data


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object")
        data.setdefault("params", {})
    else:
        data = parse_config_text(text)
    return config_from_dict(data)


def config_from_dict(data: dict) -> ExperimentConfig:
    known = {"experiment", "params", "seed", "out"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown top-level config key(s): {', '.join(unknown)}")
    if "experiment" not in data:
        raise ConfigError("config must name an experiment")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("[params] must be a table of key = value entries")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("seed must be an integer")
    return ExperimentConfig(experiment=str(data["experiment"]), params=params,
                            seed=seed, out_dir=str(data.get("out", ".")))
