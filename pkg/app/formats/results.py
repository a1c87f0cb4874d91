"""JSON result documents written by the command line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Final

from app.core.algebra import AlgebraSpec
from app.core.dixon import CharacterTable

SCHEMA_VERSION: Final[int] = 1


def describe_algebra(spec: AlgebraSpec) -> dict[str, Any]:
    field_spec = spec.field
    return {
        "p": field_spec.p,
        "f": field_spec.f,
        "modulus": list(field_spec.modulus),
        "tau_order": field_spec.tau_order,
        "q_sigma": field_spec.q_sigma,
        "dim": spec.dim,
        "basis": list(spec.basis_names),
        "metadata": dict(spec.metadata),
    }


def describe_table(table: CharacterTable) -> dict[str, Any]:
    classes = table.group.classes
    return {
        "prime": table.prime,
        "exponent": table.exponent,
        "class_sizes": [int(size) for size in classes.sizes],
        "degrees": table.degrees,
        "characters": [chi.as_values() for chi in table.characters],
    }


@dataclass(slots=True)
class ResultDocument:
    """Machine-readable outcome of one command."""

    command: str
    seed: int
    algebra: dict[str, Any]
    passed: bool = True
    orders: dict[str, int | None] = field(default_factory=dict)
    class_count: int | None = None
    table: dict[str, Any] | None = None
    certificates: list[dict[str, Any]] = field(default_factory=list)
    lemma_checks: dict[str, bool] = field(default_factory=dict)
    failures: list[dict[str, Any]] = field(default_factory=list)
    notes: list[dict[str, Any]] = field(default_factory=list)
    timing: dict[str, float] | None = None
    schema_version: int = SCHEMA_VERSION

    def as_dict(self) -> dict[str, Any]:
        data = asdict(self)
        if self.timing is None:
            data.pop("timing")
        return data

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ResultDocument:
        data = json.loads(text)
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {version!r}")
        return cls(**data)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")


__all__ = ["ResultDocument", "SCHEMA_VERSION", "describe_algebra", "describe_table"]
