"""Bounded operators on l2 given by closed-form matrix entries in the standard basis.

Every kind is banded, so (Tx)_k only needs finitely many terms of x and the
n x n finite section is exact rational data.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping

from ..errors import DimensionError, InvalidSpecError
from ..linalg import Matrix, ScalarKind, to_fraction
from .sequences import HARMONIC, SequenceGen, get_sequence

logger = logging.getLogger(__name__)


class OperatorKind(str, Enum):
    DIAGONAL = "diagonal"
    RIGHT_SHIFT = "right_shift"
    LEFT_SHIFT = "left_shift"
    ID_PLUS_RIGHT_SHIFT = "id_plus_right_shift"
    ID_PLUS_LEFT_SHIFT = "id_plus_left_shift"
    LOWER_BIDIAGONAL_TWOS = "lower_bidiagonal_twos"
    BLOCK_ROTATION_MIX = "block_rotation_mix"
    FIRST_ENTRY_COUPLED = "first_entry_coupled"
    COMPACT_DIAGONAL = "compact_diagonal"

    @classmethod
    def parse(cls, value: "OperatorKind | str") -> "OperatorKind":
        """Accepts the enum value, its name or the CamelCase form ("IdPlusRightShift")."""
        if isinstance(value, OperatorKind):
            return value
        raw = str(value).strip()
        if not (raw.isupper() or raw.islower()):
            raw = re.sub(r"(?<!^)(?=[A-Z])", "_", raw)
        key = re.sub(r"[-_]+", "_", raw.lower())
        try:
            return cls(key)
        except ValueError:
            known = ", ".join(k.value for k in cls)
            raise InvalidSpecError(f"Unknown operator kind '{value}' (known: {known})") from None


# (lower, upper) bandwidth per kind
_BANDS = {
    OperatorKind.DIAGONAL: (0, 0),
    OperatorKind.COMPACT_DIAGONAL: (0, 0),
    OperatorKind.RIGHT_SHIFT: (1, 0),
    OperatorKind.LEFT_SHIFT: (0, 1),
    OperatorKind.ID_PLUS_RIGHT_SHIFT: (1, 0),
    OperatorKind.ID_PLUS_LEFT_SHIFT: (0, 1),
    OperatorKind.LOWER_BIDIAGONAL_TWOS: (1, 0),
    OperatorKind.BLOCK_ROTATION_MIX: (1, 1),
    OperatorKind.FIRST_ENTRY_COUPLED: (0, 1),
}

_BLOCK_KINDS = {OperatorKind.BLOCK_ROTATION_MIX}


@dataclass(frozen=True)
class OperatorSpec:
    kind: OperatorKind
    sequence: SequenceGen | None = None
    coupling: Fraction = Fraction(-7)
    params: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        kind = OperatorKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "coupling", to_fraction(self.coupling))
        if kind is OperatorKind.COMPACT_DIAGONAL and self.sequence is None:
            object.__setattr__(self, "sequence", HARMONIC)
        if kind in (OperatorKind.DIAGONAL, OperatorKind.COMPACT_DIAGONAL):
            if self.sequence is None:
                raise InvalidSpecError("A diagonal operator needs a 'sequence' parameter")
            if not self.sequence.bounded:
                raise InvalidSpecError(f"Diagonal sequence '{self.sequence.name}' declares no bound on sup|a_n|")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "OperatorSpec":
        """Parse {"kind": str, "params": {...}}."""
        if "kind" not in data:
            raise InvalidSpecError("Operator spec needs a 'kind'")
        kind = OperatorKind.parse(data["kind"])
        params = dict(data.get("params") or {})
        try:
            sequence = None
            if "sequence" in params:
                seq_params = {k: v for k, v in params.items() if k != "sequence"}
                sequence = get_sequence(str(params["sequence"]), **seq_params)
            return cls(kind, sequence=sequence, coupling=params.get("coupling", -7), params=params)
        except InvalidSpecError:
            raise
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise InvalidSpecError(f"Invalid parameters for {kind.value}: {e}") from e

    def as_dict(self) -> dict:
        params: dict[str, Any] = {}
        if self.kind is OperatorKind.DIAGONAL and self.sequence is not None:
            params["sequence"] = self.sequence.name
            params.update(dict(self.sequence.params))
        if self.kind is OperatorKind.FIRST_ENTRY_COUPLED:
            params["coupling"] = str(self.coupling)
        return {"kind": self.kind.value, "params": params}

    @property
    def bandwidth(self) -> tuple[int, int]:
        return _BANDS[self.kind]

    @property
    def block_size(self) -> int:
        return 2 if self.kind in _BLOCK_KINDS else 1

    def entry(self, i: int, j: int) -> Fraction:
        """<T e_j, e_i> for 1-based i, j."""
        if i < 1 or j < 1:
            raise DimensionError(f"Entries are 1-based, got ({i}, {j})")
        k = self.kind
        if k in (OperatorKind.DIAGONAL, OperatorKind.COMPACT_DIAGONAL):
            return self.sequence(i) if i == j else Fraction(0)
        if k is OperatorKind.RIGHT_SHIFT:
            return Fraction(int(i == j + 1))
        if k is OperatorKind.LEFT_SHIFT:
            return Fraction(int(j == i + 1))
        if k is OperatorKind.ID_PLUS_RIGHT_SHIFT:
            return Fraction(int(i == j or i == j + 1))
        if k is OperatorKind.ID_PLUS_LEFT_SHIFT:
            return Fraction(int(i == j or j == i + 1))
        if k is OperatorKind.LOWER_BIDIAGONAL_TWOS:
            if i == j:
                return Fraction(1)
            return Fraction(2) if i == j + 1 else Fraction(0)
        if k is OperatorKind.BLOCK_ROTATION_MIX:
            # 2x2 blocks [[1, -1], [1, 1]]
            if i % 2:
                if j == i:
                    return Fraction(1)
                return Fraction(-1) if j == i + 1 else Fraction(0)
            return Fraction(1) if j in (i - 1, i) else Fraction(0)
        if k is OperatorKind.FIRST_ENTRY_COUPLED:
            if i == j:
                return Fraction(1)
            return self.coupling if (i, j) == (1, 2) else Fraction(0)
        raise InvalidSpecError(f"No entry rule for {k.value}")

    def __str__(self) -> str:
        return self.kind.value if self.sequence is None else f"{self.kind.value}({self.sequence.name})"


def check_size(spec: OperatorSpec, n: int) -> None:
    if n < 1:
        raise DimensionError(f"Truncation size must be positive, got {n}")
    if n % spec.block_size:
        raise DimensionError(f"{spec.kind.value} needs n divisible by {spec.block_size}, got {n}")


def truncate(spec: OperatorSpec, n: int) -> Matrix:
    """Finite section: entry (i, j) = <T e_j, e_i> for i, j <= n, exact rational."""
    check_size(spec, n)
    lower, upper = spec.bandwidth
    rows = [
        [spec.entry(i, j) if -upper <= i - j <= lower else Fraction(0) for j in range(1, n + 1)]
        for i in range(1, n + 1)
    ]
    return Matrix.from_rows(rows, ScalarKind.RATIONAL)


def apply_operator(spec: OperatorSpec, x: SequenceGen, k: int) -> Fraction:
    """(Tx)_k for the infinite sequence x; only the band around k contributes."""
    if k < 1:
        raise DimensionError(f"Coordinates are 1-based, got {k}")
    lower, upper = spec.bandwidth
    return sum((spec.entry(k, j) * x(j) for j in range(max(1, k - lower), k + upper + 1)), Fraction(0))


def first_prefix_violation(spec: OperatorSpec, witness: SequenceGen, upto: int, tol=0) -> int | None:
    """Smallest k <= upto with x_k (Tx)_k > tol, or None."""
    if upto < 1:
        raise ValueError(f"upto must be positive, got {upto}")
    for k in range(1, upto + 1):
        if witness(k) * apply_operator(spec, witness, k) > tol:
            return k
    return None


def verify_witness_prefix(spec: OperatorSpec, witness: SequenceGen, upto: int, tol=0) -> bool:
    """True iff x_k (Tx)_k <= tol for every k <= upto, computed on the infinite operator."""
    k = first_prefix_violation(spec, witness, upto, tol)
    if k is not None:
        logger.debug("%s reverses no sign of %s at k=%d", spec, witness.name, k)
    return k is None


def diagonal_bounds(spec: OperatorSpec, n: int) -> tuple[Fraction, Fraction]:
    """(min, max) of the truncated diagonal; only for diagonal kinds."""
    if spec.kind not in (OperatorKind.DIAGONAL, OperatorKind.COMPACT_DIAGONAL):
        raise InvalidSpecError(f"diagonal_bounds needs a diagonal kind, got {spec.kind.value}")
    check_size(spec, n)
    values = [spec.sequence(i) for i in range(1, n + 1)]
    return min(values), max(values)
