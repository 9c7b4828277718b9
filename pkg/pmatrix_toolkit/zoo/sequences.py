"""Closed-form real sequences n -> x_n (n >= 1), used as diagonals and as witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..errors import InvalidSpecError
from ..linalg import Vector, to_fraction


@dataclass(frozen=True)
class SequenceGen:
    name: str
    rule: Callable[[int], Fraction] = field(compare=False, repr=False)
    square_summable: bool
    # declared bounds: inf_n x_n and sup_n |x_n| (None when unbounded)
    inf: Fraction | None = None
    sup_abs: Fraction | None = None
    description: str = ""
    params: tuple[tuple[str, str], ...] = ()

    def __call__(self, n: int) -> Fraction:
        if n < 1:
            raise ValueError(f"Sequences are indexed from 1, got {n}")
        return self.rule(n)

    def prefix(self, n: int) -> Vector:
        return Vector.of([self(k) for k in range(1, n + 1)])

    @property
    def bounded(self) -> bool:
        return self.sup_abs is not None

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "square_summable": self.square_summable,
            "inf": str(self.inf) if self.inf is not None else None,
            "sup_abs": str(self.sup_abs) if self.sup_abs is not None else None,
        }
        if self.params:
            out["params"] = dict(self.params)
        return out


def _sign(n: int) -> int:
    return 1 if n % 2 else -1


ALTERNATING_HARMONIC = SequenceGen(
    "alternating_harmonic",
    lambda n: Fraction(_sign(n), n),
    square_summable=True,
    inf=Fraction(-1, 2),
    sup_abs=Fraction(1),
    description="(1, -1/2, 1/3, -1/4, ...)",
)

ALTERNATING_ONES = SequenceGen(
    "alternating_ones",
    lambda n: Fraction(_sign(n)),
    square_summable=False,
    inf=Fraction(-1),
    sup_abs=Fraction(1),
    description="(1, -1, 1, -1, ...)",
)

HARMONIC = SequenceGen(
    "harmonic",
    lambda n: Fraction(1, n),
    square_summable=True,
    inf=Fraction(0),
    sup_abs=Fraction(1),
    description="(1, 1/2, 1/3, ...); positive, infimum 0 not attained",
)

ONE_PLUS_HARMONIC = SequenceGen(
    "one_plus_harmonic",
    lambda n: 1 + Fraction(1, n),
    square_summable=False,
    inf=Fraction(1),
    sup_abs=Fraction(2),
    description="(2, 3/2, 4/3, ...); bounded away from 0",
)


def constant(value) -> SequenceGen:
    c = to_fraction(value)
    return SequenceGen(
        "constant",
        lambda n: c,
        square_summable=c == 0,
        inf=c,
        sup_abs=abs(c),
        description=f"({c}, {c}, ...)",
        params=(("value", str(c)),),
    )


CATALOGUE: dict[str, SequenceGen] = {
    s.name: s for s in (ALTERNATING_HARMONIC, ALTERNATING_ONES, HARMONIC, ONE_PLUS_HARMONIC)
}


def get_sequence(name: str, **params) -> SequenceGen:
    key = name.strip().lower().replace("-", "_")
    if key == "constant":
        if "value" not in params:
            raise InvalidSpecError("The constant sequence needs a 'value' parameter")
        return constant(params["value"])
    try:
        return CATALOGUE[key]
    except KeyError:
        known = ", ".join(sorted([*CATALOGUE, "constant"]))
        raise InvalidSpecError(f"Unknown sequence '{name}' (known: {known})") from None
