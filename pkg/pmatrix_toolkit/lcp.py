"""Linear complementarity problems by complementary-support enumeration.

LCP(A, q): find z >= 0 with w = Az + q >= 0 and z.w = 0. Every solution is
determined by the support set where w is forced to zero, so walking all 2^n
supports finds every solution, which is what the uniqueness test needs.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import CapExceededError, DimensionError, SingularMatrixError
from .linalg import IndexSet, Matrix, Vector, matvec, principal_submatrix, solve_linear
from .settings import get_settings
from .tracing import traceable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LcpInstance:
    """A and q; mixed scalar kinds are promoted to float."""
    a: Matrix
    q: Vector

    def __post_init__(self) -> None:
        if self.a.n != self.q.n:
            raise DimensionError(f"q has length {self.q.n}, expected {self.a.n}")
        if self.a.scalar_kind is not self.q.scalar_kind:
            object.__setattr__(self, "a", self.a.as_float())
            object.__setattr__(self, "q", self.q.as_float())

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def exact(self) -> bool:
        return self.a.is_rational

    def slack(self, z: Vector) -> Vector:
        """w = Az + q."""
        az = matvec(self.a, z)
        return Vector(az.entries + self.q.entries, self.a.scalar_kind)


@dataclass(frozen=True)
class LcpSolutionSet:
    solutions: tuple[Vector, ...]
    # supports[k] lists every (1-based) support that produced solutions[k]
    supports: tuple[tuple[tuple[int, ...], ...], ...]
    supports_tried: int = 0
    singular_skipped: int = 0

    def __len__(self) -> int:
        return len(self.solutions)

    @property
    def count(self) -> int:
        return len(self.solutions)

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "solutions": [
                {"z": z.tolist(), "supports": [list(s) for s in sup]}
                for z, sup in zip(self.solutions, self.supports)
            ],
        }


def _check_cap(what: str, n: int, cap: int | None) -> None:
    cap = cap if cap is not None else get_settings().lcp_cap
    if n > cap:
        raise CapExceededError(what, n, cap)


def iter_supports(n: int) -> Iterator[tuple[int, ...]]:
    """Every subset of {0..n-1}, the empty one first, by size and then lexicographically."""
    for k in range(n + 1):
        yield from combinations(range(n), k)


def _candidate(inst: LcpInstance, support: tuple[int, ...], tol) -> Vector | None:
    zero = Fraction(0) if inst.exact else 0.0
    z = [zero] * inst.n
    if support:
        s = IndexSet(tuple(i + 1 for i in support))
        rhs = Vector([-inst.q.entries[i] for i in support], inst.a.scalar_kind)
        sub = solve_linear(principal_submatrix(inst.a, s), rhs)
        for i, v in zip(support, sub.entries):
            z[i] = v
    zv = Vector(z, inst.a.scalar_kind)
    if any(v < -tol for v in zv.entries):
        return None
    w = inst.slack(zv)
    if any(w.entries[i] < -tol for i in range(inst.n) if i not in support):
        return None
    return zv


def _close(x: Vector, y: Vector, tol) -> bool:
    return bool(max(abs(a - b) for a, b in zip(x.entries, y.entries)) <= tol)


@traceable(name="Solve LCP by support enumeration")
def lcp_solve_all(inst: LcpInstance, *, cap: int | None = None, tol: float | None = None) -> LcpSolutionSet:
    """All solutions of LCP(A, q); singular restricted systems are skipped, duplicates merged in max-norm."""
    _check_cap("lcp_solve_all", inst.n, cap)
    if inst.exact:
        tol = Fraction(0)
    elif tol is None:
        tol = get_settings().lcp_tol

    solutions: list[Vector] = []
    supports: list[list[tuple[int, ...]]] = []
    tried = skipped = 0
    for support in iter_supports(inst.n):
        tried += 1
        try:
            z = _candidate(inst, support, tol)
        except SingularMatrixError:
            skipped += 1
            continue
        if z is None:
            continue
        label = tuple(i + 1 for i in support)
        for k, kept in enumerate(solutions):
            if _close(kept, z, tol):
                supports[k].append(label)
                break
        else:
            solutions.append(z)
            supports.append([label])
    logger.debug("n=%d: %d supports tried, %d singular, %d solutions", inst.n, tried, skipped, len(solutions))
    return LcpSolutionSet(
        tuple(solutions),
        tuple(tuple(s) for s in supports),
        supports_tried=tried,
        singular_skipped=skipped,
    )


def lcp_verify_solution(inst: LcpInstance, z: Vector, tol: float | None = None) -> bool:
    """z >= -tol, Az + q >= -tol and |z.(Az + q)| <= tol."""
    if z.n != inst.n:
        raise DimensionError(f"z has length {z.n}, expected {inst.n}")
    if z.scalar_kind is not inst.a.scalar_kind:
        inst = LcpInstance(inst.a.as_float(), inst.q.as_float())
        z = z.as_float()
    if tol is None:
        tol = 0 if (inst.exact and z.is_rational) else get_settings().lcp_tol
    w = inst.slack(z)
    if any(v < -tol for v in z.entries) or any(v < -tol for v in w.entries):
        return False
    return bool(abs(sum(a * b for a, b in zip(z.entries, w.entries))) <= tol)


@dataclass(frozen=True)
class LcpSampleReport:
    n: int
    samples: int
    seed: int
    per_sample: tuple[int, ...]
    violating_q: Vector | None = None
    violating_count: int | None = None
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def all_unique(self) -> bool:
        return self.violating_q is None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "all_unique": self.all_unique,
            "violating_q": self.violating_q.tolist() if self.violating_q is not None else None,
            "violating_count": self.violating_count,
        }


@traceable(name="LCP uniqueness over sampled q")
def lcp_unique_for_samples(
    a: Matrix,
    samples: int,
    seed: int | None = None,
    *,
    cap: int | None = None,
    tol: float | None = None,
) -> LcpSampleReport:
    """Solve LCP(A, q) for `samples` vectors q uniform on [-1, 1]^n drawn from a seeded generator."""
    _check_cap("lcp_unique_for_samples", a.n, cap)
    if samples < 1:
        raise ValueError("samples must be positive")
    if seed is None:
        seed = get_settings().seed
    rng = np.random.default_rng(seed)
    fa = a.as_float()

    per_sample: list[int] = []
    violating_q = violating_count = None
    for _ in range(samples):
        q = Vector(rng.uniform(-1.0, 1.0, size=a.n))
        count = lcp_solve_all(LcpInstance(fa, q), cap=cap, tol=tol).count
        per_sample.append(count)
        if count != 1 and violating_q is None:
            violating_q, violating_count = q, count
            logger.info("q=%s has %d solutions", q.tolist(), count)
    return LcpSampleReport(
        n=a.n,
        samples=samples,
        seed=seed,
        per_sample=tuple(per_sample),
        violating_q=violating_q,
        violating_count=violating_count,
        counts=dict(Counter(per_sample)),
    )
