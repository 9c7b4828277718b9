"""Two-phase tableau simplex with Bland's rule.

Works over floats (with a feasibility tolerance) or over Fractions (tolerance 0,
every pivot exact). Problems are stated as

    maximize  c . v   subject to   A_ub v <= b_ub,  A_eq v == b_eq,  v >= 0
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    x: tuple | None = None
    objective: object = None

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class TableauSimplex:
    def __init__(self, *, exact: bool, tol: float = 1e-9, max_iter: int = 10_000) -> None:
        self.exact = exact
        # exact arithmetic compares against zero
        self.tol = Fraction(0) if exact else float(tol)
        self.max_iter = max_iter

    def _array(self, rows) -> np.ndarray:
        if self.exact:
            arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
            for i, row in enumerate(rows):
                for j, v in enumerate(row):
                    arr[i, j] = v if isinstance(v, Fraction) else Fraction(v)
            return arr
        return np.array(rows, dtype=float)

    @staticmethod
    def _pivot(T: np.ndarray, row: int, col: int) -> None:
        T[row, :] = T[row, :] / T[row, col]
        for r in range(T.shape[0]):
            if r != row and T[r, col] != 0:
                T[r, :] = T[r, :] - T[r, col] * T[row, :]

    def _enter(self, z_row: np.ndarray, allowed: int) -> int:
        # Bland: lowest-index column with a negative reduced cost
        for j in range(allowed):
            if z_row[j] < -self.tol:
                return j
        return -1

    def _leave(self, T: np.ndarray, col: int, basis: list[int]) -> int:
        best = -1
        best_ratio = None
        for i in range(T.shape[0] - 1):
            a = T[i, col]
            if a > self.tol:
                ratio = T[i, -1] / a
                if best_ratio is None or ratio < best_ratio - self.tol:
                    best, best_ratio = i, ratio
                elif ratio <= best_ratio + self.tol and basis[i] < basis[best]:
                    # Bland tie-break on the basic variable index
                    best = i
        return best

    def _run(self, T: np.ndarray, basis: list[int], allowed: int) -> LpStatus:
        for _ in range(self.max_iter):
            j = self._enter(T[-1, :], allowed)
            if j == -1:
                return LpStatus.OPTIMAL
            i = self._leave(T, j, basis)
            if i == -1:
                return LpStatus.UNBOUNDED
            self._pivot(T, i, j)
            basis[i] = j
        return LpStatus.ITERATION_LIMIT

    def solve(
        self,
        c: Sequence,
        a_ub: Sequence[Sequence] = (),
        b_ub: Sequence = (),
        a_eq: Sequence[Sequence] = (),
        b_eq: Sequence = (),
    ) -> LpResult:
        n = len(c)
        rows = [(list(r), b, "<=") for r, b in zip(a_ub, b_ub)] + [(list(r), b, "=") for r, b in zip(a_eq, b_eq)]
        # make every right-hand side non-negative
        normalized = []
        for coeffs, b, sign in rows:
            if b < 0:
                coeffs = [-v for v in coeffs]
                b = -b
                sign = ">=" if sign == "<=" else sign
            normalized.append((coeffs, b, sign))

        num_s = sum(1 for _, _, s in normalized if s == "<=")
        num_t = sum(1 for _, _, s in normalized if s == ">=")
        num_a = sum(1 for _, _, s in normalized if s in ("=", ">="))
        sbase, tbase, abase = n, n + num_s, n + num_s + num_t
        total = abase + num_a
        m = len(normalized)

        zero = Fraction(0) if self.exact else 0.0
        grid = [[zero] * (total + 1) for _ in range(m + 1)]
        basis: list[int] = []
        si = ti = ai = 0
        for i, (coeffs, b, sign) in enumerate(normalized):
            grid[i][:n] = coeffs
            if sign == "<=":
                grid[i][sbase + si] = 1
                basis.append(sbase + si)
                si += 1
            elif sign == "=":
                grid[i][abase + ai] = 1
                basis.append(abase + ai)
                ai += 1
            else:
                grid[i][tbase + ti] = -1
                grid[i][abase + ai] = 1
                basis.append(abase + ai)
                ti += 1
                ai += 1
            grid[i][-1] = b
        T = self._array(grid)

        # Phase I: minimize the sum of artificials
        if num_a:
            for r, bc in enumerate(basis):
                if bc >= abase:
                    T[-1, :] = T[-1, :] - T[r, :]
            for j in range(abase, total):
                T[-1, j] = zero
            status = self._run(T, basis, abase)
            if status is not LpStatus.OPTIMAL:
                return LpResult(status)
            if -T[-1, -1] > self.tol:
                return LpResult(LpStatus.INFEASIBLE)
            # drive remaining artificials out of the basis
            keep = []
            for r, bc in enumerate(basis):
                if bc >= abase:
                    col = next((j for j in range(abase) if abs(T[r, j]) > self.tol), None)
                    if col is None:
                        continue  # redundant row
                    self._pivot(T, r, col)
                    basis[r] = col
                keep.append(r)
            rows_idx = keep + [T.shape[0] - 1]
            T = np.hstack([T[rows_idx, :abase], T[rows_idx, -1:]])
            basis = [basis[r] for r in keep]
        width = abase

        # Phase II: minimize -c . v
        cost = [-v for v in c] + [zero] * (width - n)
        z = [zero] * (width + 1)
        for j in range(width):
            z[j] = cost[j]
        for r, bc in enumerate(basis):
            if cost[bc] != 0:
                for j in range(width):
                    z[j] -= cost[bc] * T[r, j]
                z[width] -= cost[bc] * T[r, -1]
        T[-1, :] = self._array([z])[0]
        status = self._run(T, basis, width)
        if status is not LpStatus.OPTIMAL:
            return LpResult(status)

        x = [zero] * width
        for r, bc in enumerate(basis):
            x[bc] = T[r, -1]
        if not self.exact:
            # clip round-off below zero
            x = [max(v, 0.0) for v in x]
        return LpResult(LpStatus.OPTIMAL, tuple(x[:n]), T[-1, -1])


def solve_lp(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    *,
    exact: bool,
    tol: float = 1e-9,
) -> LpResult:
    return TableauSimplex(exact=exact, tol=tol).solve(c, a_ub, b_ub, a_eq, b_eq)
