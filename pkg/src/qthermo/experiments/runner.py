"""Experiment execution: validation, artifact assembly, exit-code mapping."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from pathlib import Path

from ..config import ConfigError, ExperimentConfig
from ..manifest import RunManifest, config_hash, render_csv
from ..qcore import InvalidInputError, IntegrationFailure
from ..stochastic import RegimeError, StochasticInstability
from . import defs
from .schema import SchemaError

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_INTEGRATION = 3
EXIT_CAP = 4

MANIFEST_NAME = "manifest.json"


class RunError(RuntimeError):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def worker_count() -> int:
    raw = os.environ.get("QTHERMO_WORKERS", "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def list_experiments() -> list[dict]:
    return [REGISTRY[name].schema_dump() for name in sorted(REGISTRY)]


REGISTRY = defs.REGISTRY


@dataclass
class RunArtifacts:
    experiment: str
    manifest: RunManifest
    files: dict[str, str]         # filename -> text content


def execute(config: ExperimentConfig, workers: int | None = None) -> RunArtifacts:
    """Run one experiment and return its artifacts as in-memory text."""
    if config.experiment not in REGISTRY:
        known = ", ".join(sorted(REGISTRY))
        raise RunError(f"unknown experiment {config.experiment!r} "
                       f"(known: {known})", EXIT_SCHEMA)
    exp = REGISTRY[config.experiment]
    try:
        params = exp.validate(config.params)
    except (SchemaError, ConfigError) as exc:
        raise RunError(str(exc), EXIT_SCHEMA) from exc

    t0 = time.perf_counter()
    try:
        result = exp.run(params, config.seed, workers or worker_count())
    except (IntegrationFailure, StochasticInstability, RegimeError) as exc:
        raise RunError(f"integration failure: {exc}", EXIT_INTEGRATION) from exc
    except InvalidInputError as exc:
        code = EXIT_CAP if "cap" in str(exc) else EXIT_SCHEMA
        raise RunError(str(exc), code) from exc
    wall = time.perf_counter() - t0

    files: dict[str, str] = {}
    summary: dict = {}
    for name, (header, rows) in result.tables.items():
        files[name] = render_csv(header, rows, MANIFEST_NAME)
    for name, payload in result.summaries.items():
        import json
        from ..manifest import fmt
        files[name] = json.dumps(payload, indent=2, sort_keys=True,
                                 default=fmt) + "\n"
        summary.update(payload if isinstance(payload, dict) else {})

    manifest = RunManifest(
        experiment=config.experiment,
        version=_toolkit_version(),
        config_hash=config_hash(config.experiment, params, config.seed),
        seed=config.seed,
        wall_time_s=wall,
        summary=summary,
        artifacts=sorted(files),
    )
    return RunArtifacts(experiment=config.experiment, manifest=manifest,
                        files=files)


def _toolkit_version() -> str:
    from .. import __version__
    return __version__


def write_artifacts(artifacts: RunArtifacts, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in artifacts.files.items():
        path = out / name
        path.write_text(text)
        written.append(path)
    manifest_path = out / MANIFEST_NAME
    manifest_path.write_text(artifacts.manifest.to_json())
    written.append(manifest_path)
    return written
