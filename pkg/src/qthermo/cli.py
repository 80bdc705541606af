"""qthermo command line: a thin client over the experiment runner.

`qthermo run` executes locally by default; with --server it posts the same
request to a running service instance and writes the returned artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig, load_config
from .experiments import (EXIT_SCHEMA, RunError, execute, list_experiments,
                          write_artifacts)
from .manifest import RunManifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qthermo",
        description="Quantum-thermodynamics experiment runner.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a named experiment")
    run.add_argument("experiment", help="experiment name (see `qthermo list`)")
    run.add_argument("--config", help="key = value or JSON config file")
    run.add_argument("--seed", type=int, default=None, help="override the seed")
    run.add_argument("--out", default=None, help="artifact output directory")
    run.add_argument("--server", default=None,
                     help="base URL of a qthermo service to run against")
    run.add_argument("--workers", type=int, default=None,
                     help="sweep parallelism (default: QTHERMO_WORKERS or 1)")

    lst = sub.add_parser("list", help="list experiments and their schemas")
    lst.add_argument("--json", action="store_true", help="machine-readable dump")

    sub.add_parser("serve", help="start the HTTP service (uvicorn)")
    return parser


def _config_for(args) -> ExperimentConfig:
    if args.config:
        config = load_config(args.config)
        if config.experiment != args.experiment:
            raise ConfigError(
                f"config names experiment {config.experiment!r} but the "
                f"command line asked for {args.experiment!r}")
    else:
        config = ExperimentConfig(experiment=args.experiment)
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.out_dir = args.out
    return config


def _run_remote(config: ExperimentConfig, server: str, workers: int | None):
    import httpx

    response = httpx.post(
        f"{server.rstrip('/')}/experiments/{config.experiment}/run",
        json={"params": config.params, "seed": config.seed,
              "include_artifacts": True, "workers": workers},
        timeout=600.0)
    if response.status_code != 200:
        detail = response.json().get("detail", response.text)
        message = detail.get("message") if isinstance(detail, dict) else detail
        code = detail.get("exit_code", EXIT_SCHEMA) if isinstance(detail, dict) \
            else EXIT_SCHEMA
        raise RunError(str(message), code)
    payload = response.json()
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in payload["artifacts"].items():
        (out / name).write_text(text)
    m = payload["manifest"]
    manifest = RunManifest(experiment=m["experiment"],
                           version=m["toolkit_version"],
                           config_hash=m["config_hash"], seed=m["seed"],
                           wall_time_s=m["wall_time_s"], summary=m["summary"],
                           artifacts=m["artifacts"])
    (out / "manifest.json").write_text(manifest.to_json())
    return manifest


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list":
        entries = list_experiments()
        if args.json:
            print(json.dumps(entries, indent=2, sort_keys=True, default=str))
        else:
            for entry in entries:
                print(f"{entry['name']:26s} [{entry['section']}] {entry['doc']}")
                for key, spec in entry["params"].items():
                    print(f"    {key} ({spec['kind']}, default {spec['default']})"
                          f" - {spec['doc']}")
        return 0

    if args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host="127.0.0.1", port=8777)
        return 0

    try:
        config = _config_for(args)
        if args.server:
            manifest = _run_remote(config, args.server, args.workers)
            print(f"wrote artifacts for {config.experiment} to {config.out_dir} "
                  f"(config hash {manifest.config_hash[:12]})")
        else:
            artifacts = execute(config, workers=args.workers)
            paths = write_artifacts(artifacts, config.out_dir)
            print(f"wrote {len(paths)} artifact(s) to {config.out_dir} "
                  f"(config hash {artifacts.manifest.config_hash[:12]})")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except RunError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
