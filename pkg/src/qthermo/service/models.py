"""Request/response models of the experiment service."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

from .. import __version__


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str = __version__


class ParamModel(BaseModel):
    kind: str
    default: Any = None
    doc: str = ""


class ExperimentInfo(BaseModel):
    name: str
    section: str
    doc: str
    params: dict[str, ParamModel]


class RunRequest(BaseModel):
    params: dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    include_artifacts: bool = True
    workers: int | None = None


class ManifestModel(BaseModel):
    experiment: str
    toolkit_version: str
    config_hash: str
    seed: int
    wall_time_s: float
    summary: dict[str, Any]
    artifacts: list[str]


class RunResponse(BaseModel):
    experiment: str
    manifest: ManifestModel
    artifacts: dict[str, str] = Field(default_factory=dict)


class ErrorResponse(BaseModel):
    detail: str
    exit_code: int
