"""Dense real matrices and vectors with a float64 and an exact-rational scalar kind.

Rational matrices hold ``fractions.Fraction`` entries in numpy object arrays, so
products and eliminations are lossless; float matrices are plain float64 arrays.
Index sets are 1-based everywhere they are reported.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterator, Sequence, Union

import numpy as np
import scipy.linalg

from .errors import DimensionError, ScalarKindError, SingularMatrixError
from .settings import get_settings

logger = logging.getLogger(__name__)

Scalar = Union[float, Fraction]


class ScalarKind(str, Enum):
    FLOAT = "float"
    RATIONAL = "rational"


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction, "p/q" string or decimal float into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError(f"Not a rational entry: {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"Non-finite entry: {value!r}")
        # decimal reading, so 0.1 becomes 1/10 rather than its binary expansion
        return Fraction(repr(float(value)))
    raise TypeError(f"Not a rational entry: {value!r}")


def to_float(value) -> float:
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    return float(value)


def is_exact_entry(value) -> bool:
    return isinstance(value, (int, np.integer, Fraction, str)) and not isinstance(value, (bool, np.bool_))


def scalar_to_json(value: Scalar):
    """Fractions serialize as "p/q" (or "p"), floats as floats."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


def _coerce(entries, kind: ScalarKind, ndim: int) -> np.ndarray:
    if kind is ScalarKind.RATIONAL:
        raw = np.array(entries, dtype=object)
        if raw.ndim != ndim:
            raise DimensionError(f"Expected a {ndim}-D grid of entries, got {raw.ndim}-D")
        arr = np.empty(raw.shape, dtype=object)
        for idx, v in np.ndenumerate(raw):
            arr[idx] = to_fraction(v)
    else:
        if isinstance(entries, np.ndarray) and entries.dtype.kind in "fiu":
            raw = entries
        else:
            raw = np.array(entries, dtype=object)
        if raw.ndim != ndim:
            raise DimensionError(f"Expected a {ndim}-D grid of entries, got {raw.ndim}-D")
        if raw.dtype.kind in "fiu":
            arr = raw.astype(float, copy=True)
        else:
            arr = np.array([to_float(v) for v in raw.ravel()], dtype=float).reshape(raw.shape)
        if not np.all(np.isfinite(arr)):
            raise ValueError("Matrix entries must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Matrix:
    """Square n x n real matrix."""
    entries: np.ndarray
    scalar_kind: ScalarKind = ScalarKind.FLOAT

    def __post_init__(self) -> None:
        kind = ScalarKind(self.scalar_kind)
        arr = _coerce(self.entries, kind, 2)
        if arr.shape[0] < 1 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"Matrix must be square and non-empty, got shape {arr.shape}")
        object.__setattr__(self, "scalar_kind", kind)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], scalar_kind: ScalarKind | str | None = None) -> "Matrix":
        """Build a matrix, inferring the rational kind when every entry is exact."""
        if scalar_kind is None:
            exact = all(is_exact_entry(v) for row in rows for v in row)
            scalar_kind = ScalarKind.RATIONAL if exact else ScalarKind.FLOAT
        return cls(np.array(rows, dtype=object), ScalarKind(scalar_kind))

    @classmethod
    def identity(cls, n: int, scalar_kind: ScalarKind | str = ScalarKind.RATIONAL) -> "Matrix":
        return cls(np.eye(n, dtype=int).astype(object), ScalarKind(scalar_kind))

    @classmethod
    def diagonal(cls, values: Sequence, scalar_kind: ScalarKind | str | None = None) -> "Matrix":
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(rows, scalar_kind)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def is_rational(self) -> bool:
        return self.scalar_kind is ScalarKind.RATIONAL

    def __getitem__(self, key):
        return self.entries[key]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.scalar_kind is other.scalar_kind and bool(np.array_equal(self.entries, other.entries))

    __hash__ = None  # type: ignore[assignment]

    def as_float(self) -> "Matrix":
        if not self.is_rational:
            return self
        return Matrix(self.entries, ScalarKind.FLOAT)

    def rows(self) -> list[list[Scalar]]:
        return [list(row) for row in self.entries]

    def tolist(self) -> list[list]:
        return [[scalar_to_json(v) for v in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"Matrix(n={self.n}, kind={self.scalar_kind.value}, entries={self.tolist()})"


@dataclass(frozen=True, eq=False)
class Vector:
    entries: np.ndarray
    scalar_kind: ScalarKind = ScalarKind.FLOAT

    def __post_init__(self) -> None:
        kind = ScalarKind(self.scalar_kind)
        arr = _coerce(self.entries, kind, 1)
        if arr.shape[0] < 1:
            raise DimensionError("Vector must be non-empty")
        object.__setattr__(self, "scalar_kind", kind)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def of(cls, values: Sequence, scalar_kind: ScalarKind | str | None = None) -> "Vector":
        if scalar_kind is None:
            exact = all(is_exact_entry(v) for v in values)
            scalar_kind = ScalarKind.RATIONAL if exact else ScalarKind.FLOAT
        return cls(np.array(list(values), dtype=object), ScalarKind(scalar_kind))

    @classmethod
    def basis(cls, n: int, i: int, scalar_kind: ScalarKind | str = ScalarKind.RATIONAL) -> "Vector":
        """Standard basis vector e_i (1-based)."""
        return cls.of([1 if k == i else 0 for k in range(1, n + 1)], scalar_kind)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def is_rational(self) -> bool:
        return self.scalar_kind is ScalarKind.RATIONAL

    def __getitem__(self, key):
        return self.entries[key]

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vector):
            return NotImplemented
        return self.scalar_kind is other.scalar_kind and bool(np.array_equal(self.entries, other.entries))

    __hash__ = None  # type: ignore[assignment]

    def as_float(self) -> "Vector":
        if not self.is_rational:
            return self
        return Vector(self.entries, ScalarKind.FLOAT)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.entries)

    def tolist(self) -> list:
        return [scalar_to_json(v) for v in self.entries]

    def __repr__(self) -> str:
        return f"Vector(kind={self.scalar_kind.value}, entries={self.tolist()})"


@dataclass(frozen=True, order=True)
class IndexSet:
    """Strictly increasing, non-empty set of 1-based indices."""
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise DimensionError("IndexSet must be non-empty")
        if idx[0] < 1:
            raise DimensionError(f"Indices are 1-based, got {idx[0]}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise DimensionError(f"Indices must be strictly increasing: {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, *indices: int) -> "IndexSet":
        return cls(tuple(indices))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(tuple(range(1, n + 1)))

    def check_within(self, n: int) -> None:
        if self.indices[-1] > n:
            raise DimensionError(f"Index {self.indices[-1]} out of range for n={n}")

    @property
    def zero_based(self) -> list[int]:
        return [i - 1 for i in self.indices]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.indices) + "}"


def iter_index_sets(n: int) -> Iterator[IndexSet]:
    """Every non-empty subset of {1..n}, by size and then lexicographically."""
    for k in range(1, n + 1):
        for combo in combinations(range(1, n + 1), k):
            yield IndexSet(combo)


def scaled_tol(tol: float, magnitude) -> float:
    return tol * max(1.0, abs(float(magnitude)))


def is_negligible(value: Scalar, tol: float | None = None, magnitude=0.0) -> bool:
    """Exact zero test for Fractions, scaled absolute tolerance for floats."""
    if isinstance(value, Fraction):
        return value == 0
    if tol is None:
        tol = get_settings().tol
    return abs(float(value)) <= scaled_tol(tol, magnitude)


def _same_kind(*operands) -> ScalarKind:
    kinds = {op.scalar_kind for op in operands}
    if len(kinds) != 1:
        raise ScalarKindError(f"Mixed scalar kinds: {sorted(k.value for k in kinds)}; convert with as_float() first")
    return kinds.pop()


def _check_dims(a: Matrix, other) -> None:
    if a.n != other.n:
        raise DimensionError(f"Dimension mismatch: {a.n} vs {other.n}")


def matmul(a: Matrix, b: Matrix) -> Matrix:
    _check_dims(a, b)
    kind = _same_kind(a, b)
    return Matrix(a.entries @ b.entries, kind)


def matvec(a: Matrix, x: Vector) -> Vector:
    _check_dims(a, x)
    kind = _same_kind(a, x)
    return Vector(a.entries @ x.entries, kind)


def transpose(a: Matrix) -> Matrix:
    return Matrix(a.entries.T, a.scalar_kind)


def add(a: Matrix, b: Matrix) -> Matrix:
    _check_dims(a, b)
    return Matrix(a.entries + b.entries, _same_kind(a, b))


def subtract(a: Matrix, b: Matrix) -> Matrix:
    _check_dims(a, b)
    return Matrix(a.entries - b.entries, _same_kind(a, b))


def scale(a: Matrix, c) -> Matrix:
    if a.is_rational:
        return Matrix(a.entries * to_fraction(c), a.scalar_kind)
    return Matrix(a.entries * float(c), a.scalar_kind)


def max_abs(a: Matrix | Vector) -> Scalar:
    return max(abs(v) for v in a.entries.ravel())


def chop(a: Matrix, tol: float | None = None) -> Matrix:
    """Zero out float entries within tolerance of zero; rational matrices are returned unchanged."""
    if a.is_rational:
        return a
    if tol is None:
        tol = get_settings().tol
    arr = np.array(a.entries, dtype=float)
    arr[np.abs(arr) <= scaled_tol(tol, max_abs(a))] = 0.0
    return Matrix(arr, a.scalar_kind)


def principal_submatrix(a: Matrix, s: IndexSet) -> Matrix:
    s.check_within(a.n)
    idx = s.zero_based
    return Matrix(a.entries[np.ix_(idx, idx)], a.scalar_kind)


def _integer_rows(rows: list[list[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale each row by the lcm of its denominators; return integer rows and the product of the scales."""
    int_rows = []
    multiplier = 1
    for row in rows:
        lcm = math.lcm(*(v.denominator for v in row))
        int_rows.append([int(v * lcm) for v in row])
        multiplier *= lcm
    return int_rows, multiplier


def _bareiss(m: list[list[int]]) -> int:
    """Fraction-free elimination; every division is exact."""
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k = m[i], m[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def determinant(a: Matrix) -> Scalar:
    if a.is_rational:
        int_rows, multiplier = _integer_rows(a.rows())
        return Fraction(_bareiss(int_rows), multiplier)
    return float(np.linalg.det(a.entries))


def _gauss_jordan(rows: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    m = [list(r) + list(s) for r, s in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is not invertible")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [row[n:] for row in m]


def _lu_solve(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a)
    peak = np.max(np.abs(a))
    # pivot test relative to the matrix scale
    if peak == 0 or np.min(np.abs(np.diag(lu))) <= tol * peak:
        raise SingularMatrixError("matrix is numerically singular")
    x = scipy.linalg.lu_solve((lu, piv), b)
    residual = np.max(np.abs(a @ x - b))
    if residual > tol * (peak * np.max(np.abs(x)) + np.max(np.abs(b))):
        raise SingularMatrixError(f"solve residual {residual:.3e} above tolerance; matrix is ill-conditioned")
    return x


def solve_linear(a: Matrix, b: Vector, tol: float | None = None) -> Vector:
    """Solve A x = b; raises SingularMatrixError when there is no unique solution."""
    _check_dims(a, b)
    kind = _same_kind(a, b)
    if kind is ScalarKind.RATIONAL:
        x = _gauss_jordan(a.rows(), [[v] for v in b.entries])
        return Vector([row[0] for row in x], kind)
    if tol is None:
        tol = get_settings().tol
    return Vector(_lu_solve(np.asarray(a.entries, dtype=float), np.asarray(b.entries, dtype=float), tol), kind)


def inverse(a: Matrix, tol: float | None = None) -> Matrix:
    if a.is_rational:
        eye = [[Fraction(int(i == j)) for j in range(a.n)] for i in range(a.n)]
        return Matrix(_gauss_jordan(a.rows(), eye), a.scalar_kind)
    if tol is None:
        tol = get_settings().tol
    return Matrix(_lu_solve(np.asarray(a.entries, dtype=float), np.eye(a.n), tol), a.scalar_kind)


def is_orthogonal(u: Matrix, tol: float | None = None) -> bool:
    if tol is None:
        tol = get_settings().tol
    gram = matmul(transpose(u), u)
    residual = subtract(gram, Matrix.identity(u.n, u.scalar_kind))
    return bool(max_abs(residual) <= tol)


def matrices_close(a: Matrix, b: Matrix, tol: float | None = None) -> bool:
    """Entrywise comparison; exact when both operands are rational."""
    _check_dims(a, b)
    if a.is_rational and b.is_rational:
        return a == b
    if tol is None:
        tol = get_settings().tol
    return bool(max_abs(subtract(a.as_float(), b.as_float())) <= scaled_tol(tol, max(max_abs(a), max_abs(b))))

