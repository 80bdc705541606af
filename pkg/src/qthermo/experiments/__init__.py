"""Named experiments plus the runner that turns them into artifacts."""

from .runner import (EXIT_CAP, EXIT_INTEGRATION, EXIT_OK, EXIT_SCHEMA,
                     REGISTRY, RunArtifacts, RunError, execute,
                     list_experiments, worker_count, write_artifacts)
from .schema import ExperimentDef, ParamSpec, SchemaError

__all__ = [
    "EXIT_CAP", "EXIT_INTEGRATION", "EXIT_OK", "EXIT_SCHEMA", "REGISTRY",
    "ExperimentDef", "ParamSpec", "RunArtifacts", "RunError", "SchemaError",
    "execute", "list_experiments", "worker_count", "write_artifacts",
]
