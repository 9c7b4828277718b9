from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml

from ..errors import InputFormatError, UnknownPresetError
from ..linalg import Vector
from .operators import OperatorSpec
from .sequences import SequenceGen, get_sequence

PRESETS_PATH = Path(__file__).parent / "presets.yaml"


@dataclass(frozen=True)
class ExpectedVerdict:
    is_p: bool
    witness: Vector | None = None


@dataclass(frozen=True)
class Preset:
    name: str
    example: int
    summary: str
    spec: OperatorSpec
    default_n: int
    expected: dict[str, ExpectedVerdict] = field(default_factory=dict)
    witness_sequence: SequenceGen | None = None
    positive_definite: bool | None = None
    quadratic_point: Vector | None = None
    commutes_with_block_hadamard: bool | None = None

    @property
    def bases(self) -> list[str]:
        return list(self.expected)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "example": self.example,
            "summary": self.summary,
            "spec": self.spec.as_dict(),
            "default_n": self.default_n,
            "expected": {k: v.is_p for k, v in self.expected.items()},
        }


def _parse(name: str, raw: dict[str, Any]) -> Preset:
    try:
        expected = {
            basis: ExpectedVerdict(
                bool(entry["is_p"]),
                Vector.of(entry["witness"]) if entry.get("witness") is not None else None,
            )
            for basis, entry in (raw.get("expected") or {}).items()
        }
        return Preset(
            name=name,
            example=int(raw["example"]),
            summary=str(raw.get("summary", "")),
            spec=OperatorSpec.from_dict(raw["spec"]),
            default_n=int(raw["default_n"]),
            expected=expected,
            witness_sequence=get_sequence(raw["witness_sequence"]) if raw.get("witness_sequence") else None,
            positive_definite=raw.get("positive_definite"),
            quadratic_point=Vector.of(raw["quadratic_point"]) if raw.get("quadratic_point") else None,
            commutes_with_block_hadamard=raw.get("commutes_with_block_hadamard"),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputFormatError(f"Malformed preset '{name}': {e}") from e


@lru_cache(maxsize=4)
def load_presets(path: Path = PRESETS_PATH) -> dict[str, Preset]:
    with open(path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f) or {}
    if not isinstance(raw, dict):
        raise InputFormatError(f"{path}: expected a mapping of preset names")
    return {name: _parse(name, body) for name, body in raw.items()}


def get_preset(name: str) -> Preset:
    presets = load_presets()
    key = name.strip().lower()
    if key not in presets:
        raise UnknownPresetError(f"Unknown preset '{name}' (known: {', '.join(presets)})")
    return presets[key]


def preset_names() -> list[str]:
    return list(load_presets())
