"""Decide the P-property of a finite matrix.

Two independent routes: exhaustive principal minors, and the sign
non-reversal characterization (no nonzero x with x_i (Ax)_i <= 0 for all i)
checked orthant by orthant with an LP. Each route returns a checkable
certificate.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import ClassVar, Iterator, Union

import numpy as np

from .errors import CapExceededError, DimensionError, MethodDisagreementError
from .linalg import (
    IndexSet,
    Matrix,
    Scalar,
    Vector,
    determinant,
    is_negligible,
    iter_index_sets,
    matvec,
    principal_submatrix,
    scalar_to_json,
    transpose,
)
from .settings import get_settings
from .simplex import TableauSimplex
from .tracing import traceable

logger = logging.getLogger(__name__)

WITNESS_NOISE_FACTOR = 10


class PMethod(str, Enum):
    MINORS = "minors"
    SIGN_REVERSAL = "sign_reversal"
    BOTH = "both"

    @classmethod
    def parse(cls, value: "PMethod | str") -> "PMethod":
        if isinstance(value, PMethod):
            return value
        return cls(str(value).replace("-", "_"))


@dataclass(frozen=True)
class SignPattern:
    """Orthant selector; signs[i] is +1 or -1."""
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.signs or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"Sign pattern entries must be +1 or -1: {self.signs}")

    @classmethod
    def from_index(cls, p: int, n: int) -> "SignPattern":
        """s_i = -1 iff bit (i-1) of p is set."""
        return cls(tuple(-1 if (p >> i) & 1 else 1 for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.signs)

    def __str__(self) -> str:
        return "(" + ",".join("+" if s > 0 else "-" for s in self.signs) + ")"


@dataclass(frozen=True)
class NonPositiveMinor:
    kind: ClassVar[str] = "minor"
    indices: IndexSet
    value: Scalar

    def as_dict(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices), "value": scalar_to_json(self.value)}


@dataclass(frozen=True)
class SignReversalWitness:
    kind: ClassVar[str] = "witness"
    vector: Vector

    def as_dict(self) -> dict:
        return {"kind": self.kind, "vector": self.vector.tolist()}


@dataclass(frozen=True)
class AllMinorsPositive:
    kind: ClassVar[str] = "all_minors_positive"
    # minors covered, 2^n - 1
    count: int
    # minors computed directly; the rest follow from the block factorization
    evaluated: int | None = None

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "count": self.count}
        if self.evaluated is not None and self.evaluated != self.count:
            out["evaluated"] = self.evaluated
        return out


@dataclass(frozen=True)
class NoSignReversal:
    kind: ClassVar[str] = "no_sign_reversal"
    patterns_checked: int

    def as_dict(self) -> dict:
        return {"kind": self.kind, "patterns_checked": self.patterns_checked}


Certificate = Union[NonPositiveMinor, SignReversalWitness, AllMinorsPositive, NoSignReversal]


@dataclass(frozen=True)
class PVerdict:
    is_p: bool
    method: PMethod
    certificate: Certificate
    # second certificate when both routes ran and the matrix is not P
    witness: SignReversalWitness | None = None
    # a float minor sat within tolerance of zero
    boundary: bool = False

    def witness_vector(self) -> Vector | None:
        if isinstance(self.certificate, SignReversalWitness):
            return self.certificate.vector
        return self.witness.vector if self.witness is not None else None

    def as_dict(self) -> dict:
        out = {"is_p": self.is_p, "method": self.method.value, "certificate": self.certificate.as_dict()}
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        if self.boundary:
            out["boundary"] = True
        return out


def _check_cap(what: str, n: int, cap: int) -> None:
    if n > cap:
        raise CapExceededError(what, n, cap)


def iter_principal_minors(a: Matrix) -> Iterator[tuple[IndexSet, Scalar]]:
    for s in iter_index_sets(a.n):
        yield s, determinant(principal_submatrix(a, s))


def principal_minors(a: Matrix, *, cap: int | None = None) -> list[tuple[IndexSet, Scalar]]:
    """All 2^n - 1 principal minors, ordered by subset size and then lexicographically."""
    _check_cap("principal_minors", a.n, cap if cap is not None else get_settings().minor_cap)
    return list(iter_principal_minors(a))


def diagonal_blocks(a: Matrix) -> list[IndexSet]:
    """Finest contiguous partition along which A is block triangular.

    At every cut either the lower-left or the upper-right corner is zero, so each
    principal minor factors into minors of the diagonal blocks.
    """
    nz = np.asarray(a.entries != 0, dtype=bool)
    blocks: list[IndexSet] = []
    start = 0
    for k in range(1, a.n):
        if not nz[k:, :k].any() or not nz[:k, k:].any():
            blocks.append(IndexSet(tuple(range(start + 1, k + 1))))
            start = k
    blocks.append(IndexSet(tuple(range(start + 1, a.n + 1))))
    return blocks


def _first_violation(sub: Matrix, offset: int, below: int, tol: float) -> tuple[tuple[IndexSet, Scalar] | None, int]:
    """First minor <= 0 (or within tol of 0) among sets smaller than `below`, in global indices; plus minors evaluated."""
    evaluated = 0
    for s, value in iter_principal_minors(sub):
        if len(s) >= below:
            break
        evaluated += 1
        if is_negligible(value, tol) or value < 0:
            return (IndexSet(tuple(i + offset for i in s)), value), evaluated
    return None, evaluated


def is_p_by_minors(a: Matrix, *, cap: int | None = None, tol: float | None = None) -> PVerdict:
    """Strict positivity of every principal minor, block by block.

    Only minors inside a diagonal block are evaluated; the cap applies to the
    largest block. The certificate is the first violating set by size and then
    lexicographic order, the same set a full enumeration would report.
    """
    if tol is None:
        tol = get_settings().tol
    blocks = diagonal_blocks(a)
    _check_cap("is_p_by_minors", max(len(b) for b in blocks), cap if cap is not None else get_settings().minor_cap)
    evaluated = 0
    best: tuple[IndexSet, Scalar] | None = None
    for block in blocks:
        sub = a if len(blocks) == 1 else principal_submatrix(a, block)
        # a later block can only win with a strictly smaller set
        below = len(best[0]) if best is not None else a.n + 1
        found, count = _first_violation(sub, block.indices[0] - 1, below, tol)
        evaluated += count
        if found is not None:
            best = found
    if best is None:
        return PVerdict(True, PMethod.MINORS, AllMinorsPositive((1 << a.n) - 1, evaluated))
    s, value = best
    boundary = not a.is_rational and is_negligible(value, tol)
    if boundary:
        logger.info("minor over %s is %.3e, within tolerance of zero; classified not P", s, value)
    else:
        logger.debug("minor over %s is %s", s, value)
    return PVerdict(False, PMethod.MINORS, NonPositiveMinor(s, value), boundary=boundary)


def _as_common_kind(a: Matrix, x: Vector) -> tuple[Matrix, Vector]:
    if a.scalar_kind is x.scalar_kind:
        return a, x
    return a.as_float(), x.as_float()


def sign_products(a: Matrix, x: Vector) -> list[Scalar]:
    """x_i (Ax)_i for every coordinate."""
    if a.n != x.n:
        raise DimensionError(f"Dimension mismatch: {a.n} vs {x.n}")
    a, x = _as_common_kind(a, x)
    ax = matvec(a, x)
    return [xi * yi for xi, yi in zip(x.entries, ax.entries)]


def reverses_sign(a: Matrix, x: Vector, tol: float | None = None) -> bool:
    """True iff x_i (Ax)_i <= tol for every i; exact inputs default to tol 0."""
    products = sign_products(a, x)
    if tol is None:
        tol = 0 if (a.is_rational and x.is_rational) else get_settings().tol
    return all(p <= tol for p in products)


def _orthant_rows(a: Matrix, s: SignPattern) -> list[list]:
    """Rows of S A S, the constraint matrix for y = S x >= 0."""
    return [[s.signs[i] * s.signs[j] * a.entries[i, j] for j in range(a.n)] for i in range(a.n)]


def _solver(a: Matrix, tol: float) -> TableauSimplex:
    return TableauSimplex(exact=a.is_rational, tol=tol)


def _orthant_is_feasible(rows: list[list], solver: TableauSimplex) -> bool:
    n = len(rows)
    res = solver.solve([0] * n, a_ub=rows, b_ub=[0] * n, a_eq=[[1] * n], b_eq=[1])
    return res.is_optimal


def _centred_point(rows: list[list], solver: TableauSimplex) -> list | None:
    """Unique reproducible point of {y >= 0, rows.y <= 0, sum y = 1}.

    Maximizes min_i y_i, then y_1, y_2, ... in turn with earlier optima held.
    """
    n = len(rows)
    slack = 0 if solver.exact else solver.tol
    a_ub = [list(r) + [0] for r in rows] + [[-1 if j == i else 0 for j in range(n)] + [1] for i in range(n)]
    res = solver.solve([0] * n + [1], a_ub=a_ub, b_ub=[0] * (2 * n), a_eq=[[1] * n + [0]], b_eq=[1])
    if not res.is_optimal:
        return None
    t_star = res.x[n]
    floors = [t_star - slack] * n
    point = list(res.x[:n])
    for k in range(n):
        bounds = [[-1 if j == i else 0 for j in range(n)] for i in range(n)]
        stage = solver.solve(
            [1 if j == k else 0 for j in range(n)],
            a_ub=[list(r) for r in rows] + bounds,
            b_ub=[0] * n + [-f for f in floors],
            a_eq=[[1] * n],
            b_eq=[1],
        )
        if not stage.is_optimal:
            logger.debug("lexicographic stage %d did not solve (%s); keeping previous point", k, stage.status)
            break
        point = list(stage.x)
        floors[k] = max(floors[k], point[k] - slack)
    return point


def orthant_feasible(a: Matrix, s: SignPattern, tol: float | None = None) -> Vector | None:
    """A point x with s_i x_i >= 0, s_i (Ax)_i <= 0 and sum s_i x_i = 1, or None when infeasible."""
    if s.n != a.n:
        raise DimensionError(f"Sign pattern length {s.n} does not match n={a.n}")
    if tol is None:
        tol = get_settings().tol
    rows = _orthant_rows(a, s)
    solver = _solver(a, tol)
    if not _orthant_is_feasible(rows, solver):
        return None
    y = _centred_point(rows, solver)
    if y is None:
        return None
    return Vector([si * yi for si, yi in zip(s.signs, y)], a.scalar_kind)


def normalize_witness(x: Vector, tol: float | None = None, *, chop_noise: bool = True) -> Vector:
    """Rescale to unit max-norm with the first nonzero entry positive.

    Float entries at or below 10 n tol times the peak are LP residue and become zero.
    """
    peak = max(abs(v) for v in x.entries)
    if peak == 0:
        raise ValueError("A witness must be nonzero")
    entries = list(x.entries)
    if not x.is_rational and chop_noise:
        floor = WITNESS_NOISE_FACTOR * len(entries) * (tol if tol is not None else get_settings().tol) * peak
        entries = [0.0 if abs(v) <= floor else v for v in entries]
    lead = next(v for v in entries if v != 0)
    factor = peak if lead > 0 else -peak
    return Vector([v / factor for v in entries], x.scalar_kind)


def find_sign_reversal_witness(a: Matrix, *, cap: int | None = None, tol: float | None = None) -> Vector | None:
    """First feasible sign pattern in binary order, or None when A reverses no nonzero sign.

    Patterns p and its complement describe x and -x, so only patterns with s_n = +1 are
    scanned; the first feasible pattern among all 2^n is always one of them.
    """
    _check_cap("find_sign_reversal_witness", a.n, cap if cap is not None else get_settings().witness_cap)
    if tol is None:
        tol = get_settings().tol
    solver = _solver(a, tol)
    half = 1 << (a.n - 1)
    for p in range(half):
        s = SignPattern.from_index(p, a.n)
        rows = _orthant_rows(a, s)
        if not _orthant_is_feasible(rows, solver):
            continue
        logger.debug("orthant %s is feasible (pattern %d of %d)", s, p, 2 * half)
        y = _centred_point(rows, solver)
        if y is None:
            continue
        raw = Vector([si * yi for si, yi in zip(s.signs, y)], a.scalar_kind)
        witness = normalize_witness(raw, tol)
        if not a.is_rational and not reverses_sign(a, witness, tol):
            logger.debug("chopped witness no longer reverses signs; keeping the raw LP point")
            witness = normalize_witness(raw, tol, chop_noise=False)
        return witness
    return None


def patterns_scanned(n: int) -> int:
    return 1 << (n - 1)


@traceable(name="Decide P-property")
def is_p(
    a: Matrix,
    method: PMethod | str = PMethod.BOTH,
    *,
    minor_cap: int | None = None,
    witness_cap: int | None = None,
    tol: float | None = None,
) -> PVerdict:
    method = PMethod.parse(method)
    if method is PMethod.MINORS:
        return is_p_by_minors(a, cap=minor_cap, tol=tol)

    witness = find_sign_reversal_witness(a, cap=witness_cap, tol=tol)
    if method is PMethod.SIGN_REVERSAL:
        if witness is None:
            return PVerdict(True, method, NoSignReversal(patterns_scanned(a.n)))
        return PVerdict(False, method, SignReversalWitness(witness))

    by_minors = is_p_by_minors(a, cap=minor_cap, tol=tol)
    if by_minors.is_p != (witness is None):
        raise MethodDisagreementError(by_minors, witness)
    verdict = replace(by_minors, method=PMethod.BOTH)
    if witness is not None:
        verdict = replace(verdict, witness=SignReversalWitness(witness))
    logger.info("n=%d is_p=%s (%s)", a.n, verdict.is_p, verdict.certificate.kind)
    return verdict


def symmetric_part(a: Matrix) -> Matrix:
    half = Fraction(1, 2) if a.is_rational else 0.5
    return Matrix((a.entries + transpose(a).entries) * half, a.scalar_kind)


def is_positive_definite(a: Matrix, tol: float | None = None) -> bool:
    """Sylvester's criterion on (A + A^T)/2; the quadratic form only sees the symmetric part."""
    if tol is None:
        tol = get_settings().tol
    sym = symmetric_part(a)
    for k in range(1, a.n + 1):
        d = determinant(principal_submatrix(sym, IndexSet.full(k)))
        if is_negligible(d, tol) or d < 0:
            return False
    return True


def quadratic_form(a: Matrix, x: Vector) -> Scalar:
    """<Ax, x>."""
    return sum(sign_products(a, x), start=Fraction(0) if (a.is_rational and x.is_rational) else 0.0)


__all__ = [
    "AllMinorsPositive",
    "NoSignReversal",
    "NonPositiveMinor",
    "PMethod",
    "PVerdict",
    "SignPattern",
    "SignReversalWitness",
    "find_sign_reversal_witness",
    "is_p",
    "is_p_by_minors",
    "is_positive_definite",
    "orthant_feasible",
    "principal_minors",
    "quadratic_form",
    "reverses_sign",
    "sign_products",
    "symmetric_part",
]
