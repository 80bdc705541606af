"""Run manifests and deterministic artifact serialization."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass


def fmt(value) -> str:
    """17-significant-digit serialization for byte-exact reproducibility."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    try:
        return format(float(value), ".17g")
    except (TypeError, ValueError):
        return str(value)


def render_csv(header: list[str], rows: list[tuple],
               manifest_name: str = "manifest.json") -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(c) if isinstance(c, str) else fmt(c)
                              for c in row))
    lines.append(f"# manifest: {manifest_name}")
    return "\n".join(lines) + "\n"


def config_hash(experiment: str, params: dict, seed: int) -> str:
    blob = json.dumps({"experiment": experiment, "params": params,
                       "seed": seed}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class RunManifest:
    experiment: str
    version: str
    config_hash: str
    seed: int
    wall_time_s: float
    summary: dict
    artifacts: list[str]

    def to_json(self) -> str:
        return json.dumps({
            "experiment": self.experiment,
            "toolkit_version": self.version,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
            "summary": self.summary,
            "artifacts": self.artifacts,
        }, indent=2, sort_keys=True, default=fmt) + "\n"
