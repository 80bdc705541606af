"""FastAPI service wrapping the experiment runner.

The CLI talks to the same runner either in-process or through these
endpoints; artifacts are returned inline so clients decide where they live.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import ExperimentConfig
from ..experiments import REGISTRY, RunError, execute, list_experiments
from .models import (ExperimentInfo, HealthResponse, ManifestModel,
                     RunRequest, RunResponse)

app = FastAPI(
    title="qthermo experiment service",
    version=__version__,
    description="Runs named quantum-thermodynamics experiments and returns "
                "their CSV/JSON artifacts.",
)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse()


@app.get("/experiments", response_model=list[ExperimentInfo])
def experiments() -> list[ExperimentInfo]:
    return [ExperimentInfo(**entry) for entry in list_experiments()]


@app.get("/experiments/{name}", response_model=ExperimentInfo)
def experiment_schema(name: str) -> ExperimentInfo:
    if name not in REGISTRY:
        raise HTTPException(status_code=404, detail=f"unknown experiment {name!r}")
    return ExperimentInfo(**REGISTRY[name].schema_dump())


@app.post("/experiments/{name}/run", response_model=RunResponse)
def run_experiment(name: str, request: RunRequest) -> RunResponse:
    config = ExperimentConfig(experiment=name, params=request.params,
                              seed=request.seed)
    try:
        artifacts = execute(config, workers=request.workers)
    except RunError as exc:
        status = 404 if "unknown experiment" in str(exc) else 422
        raise HTTPException(status_code=status,
                            detail={"message": str(exc),
                                    "exit_code": exc.exit_code}) from exc
    manifest = artifacts.manifest
    return RunResponse(
        experiment=name,
        manifest=ManifestModel(
            experiment=manifest.experiment,
            toolkit_version=manifest.version,
            config_hash=manifest.config_hash,
            seed=manifest.seed,
            wall_time_s=manifest.wall_time_s,
            summary=manifest.summary,
            artifacts=manifest.artifacts,
        ),
        artifacts=artifacts.files if request.include_artifacts else {},
    )
