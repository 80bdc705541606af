"""Experiment parameter schemas and validation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable


class SchemaError(ValueError):
    """Config does not validate against the experiment's schema."""


_CASTS: dict[str, Callable[[Any], Any]] = {
    "float": float,
    "int": int,
    "bool": bool,
    "str": str,
    "floats": lambda v: [float(x) for x in v],
    "ints": lambda v: [int(x) for x in v],
}


@dataclass(frozen=True)
class ParamSpec:
    kind: str
    default: Any
    doc: str = ""

    def __post_init__(self):
        if self.kind not in _CASTS:
            raise ValueError(f"unknown parameter kind {self.kind!r}")

    def coerce(self, value):
        try:
            if self.kind == "bool" and not isinstance(value, bool):
                raise TypeError("expected a boolean")
            if self.kind in ("float", "int") and isinstance(value, bool):
                raise TypeError("expected a number")
            if self.kind == "int" and isinstance(value, float) \
                    and not float(value).is_integer():
                raise TypeError("expected an integer")
            return _CASTS[self.kind](value)
        except (TypeError, ValueError) as exc:
            raise SchemaError(str(exc)) from exc


@dataclass(frozen=True)
class ExperimentDef:
    name: str
    section: str                  # provenance label shown by the registry
    doc: str
    params: dict[str, ParamSpec]
    run: Callable[..., "object"]

    def validate(self, overrides: dict) -> dict:
        unknown = sorted(set(overrides) - set(self.params))
        if unknown:
            raise SchemaError(
                f"unknown parameter key(s) for {self.name!r}: {', '.join(unknown)}")
        values = {}
        for key, spec in self.params.items():
            raw = overrides.get(key, spec.default)
            try:
                values[key] = spec.coerce(raw)
            except SchemaError as exc:
                raise SchemaError(f"{self.name}.{key}: {exc}") from exc
        return values

    def schema_dump(self) -> dict:
        return {
            "name": self.name,
            "section": self.section,
            "doc": self.doc,
            "params": {
                key: {"kind": spec.kind, "default": spec.default, "doc": spec.doc}
                for key, spec in self.params.items()
            },
        }
