"""P-tests relative to an orthonormal basis {U e_n}.

For a real orthogonal U, <x, U e_k> = <U^T x, e_k>, so T is P relative to
{U e_n} exactly when U^T T U is P in the standard basis. A witness y found
for U^T T U maps back to the original coordinates as x = U y.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .. import detect
from ..detect import PMethod, PVerdict, SignReversalWitness, normalize_witness, sign_products
from ..errors import DimensionError, NotOrthogonalError
from ..linalg import (
    Matrix,
    ScalarKind,
    Vector,
    chop,
    inverse,
    is_orthogonal,
    matmul,
    matrices_close,
    matvec,
    max_abs,
    scale,
    subtract,
    transpose,
)
from ..settings import get_settings
from ..tracing import traceable
from .operators import OperatorKind, OperatorSpec, truncate

logger = logging.getLogger(__name__)


class BasisKind(str, Enum):
    STANDARD = "standard"
    TRANSFORMED = "transformed"


class ConjugationSide(str, Enum):
    U_T_UT = "UTU*"
    UT_T_U = "U*TU"


def _require_orthogonal(u: Matrix, tol: float | None) -> None:
    if not is_orthogonal(u, tol):
        raise NotOrthogonalError(f"Matrix is not orthogonal at tol {tol if tol is not None else get_settings().tol}")


@dataclass(frozen=True)
class BasisSpec:
    kind: BasisKind = BasisKind.STANDARD
    unitary: Matrix | None = None
    label: str = "standard"

    @classmethod
    def standard(cls) -> "BasisSpec":
        return cls()

    @classmethod
    def transformed_by(cls, u: Matrix, *, label: str = "transformed", tol: float | None = None) -> "BasisSpec":
        _require_orthogonal(u, tol)
        return cls(BasisKind.TRANSFORMED, u, label)

    @classmethod
    def block_hadamard(cls, n: int) -> "BasisSpec":
        return cls.transformed_by(block_hadamard_unitary(n), label="block-hadamard")

    @property
    def is_standard(self) -> bool:
        return self.kind is BasisKind.STANDARD


def block_hadamard_unitary(n: int) -> Matrix:
    """Block diagonal with 2x2 blocks (1/sqrt 2)[[1, 1], [1, -1]]; symmetric and self-inverse."""
    if n < 2 or n % 2:
        raise DimensionError(f"block_hadamard_unitary needs a positive even n, got {n}")
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    return Matrix(np.kron(np.eye(n // 2), h), ScalarKind.FLOAT)


def _common_kind(*ms: Matrix) -> list[Matrix]:
    if all(m.is_rational for m in ms):
        return list(ms)
    return [m.as_float() for m in ms]


def conjugate(
    t: Matrix,
    u: Matrix,
    side: ConjugationSide | str = ConjugationSide.UT_T_U,
    *,
    tol: float | None = None,
) -> Matrix:
    """U T U^T or U^T T U; float results are chopped so structural zeros stay zero."""
    if t.n != u.n:
        raise DimensionError(f"Dimension mismatch: {t.n} vs {u.n}")
    _require_orthogonal(u, tol)
    side = ConjugationSide(side)
    t, u = _common_kind(t, u)
    ut = transpose(u)
    if side is ConjugationSide.U_T_UT:
        out = matmul(matmul(u, t), ut)
    else:
        out = matmul(matmul(ut, t), u)
    return chop(out, tol)


def _as_matrix(t: OperatorSpec | Matrix, n: int | None) -> Matrix:
    if isinstance(t, Matrix):
        if n is not None and n != t.n:
            raise DimensionError(f"n={n} does not match the {t.n}x{t.n} matrix")
        return t
    if n is None:
        raise DimensionError("A truncation size n is needed for an operator spec")
    return truncate(t, n)


def commutes(t: OperatorSpec | Matrix, u: Matrix, n: int | None = None, tol: float | None = None) -> bool:
    """||TU - UT||max <= tol on the n x n truncation."""
    tm = _as_matrix(t, n if n is not None else u.n)
    if tm.n != u.n:
        raise DimensionError(f"Dimension mismatch: {tm.n} vs {u.n}")
    tm, u = _common_kind(tm, u)
    if tol is None:
        tol = get_settings().tol
    diff = subtract(matmul(tm, u), matmul(u, tm))
    return bool(max_abs(diff) <= tol)


def _map_witness(verdict: PVerdict, t: Matrix, u: Matrix, tol: float | None) -> PVerdict:
    y = verdict.witness_vector()
    if y is None:
        return verdict
    if not (u.is_rational and y.is_rational):
        u, y = u.as_float(), y.as_float()
    raw = matvec(u, y)
    mapped = normalize_witness(raw, tol)
    if not mapped.is_rational and not reverses_sign_relative(t, u, mapped, tol):
        mapped = normalize_witness(raw, tol, chop_noise=False)
    x = SignReversalWitness(mapped)
    if isinstance(verdict.certificate, SignReversalWitness):
        return replace(verdict, certificate=x)
    return replace(verdict, witness=x)


@traceable(name="P-test relative to basis")
def p_test_relative(
    t: OperatorSpec | Matrix,
    basis: BasisSpec,
    n: int | None = None,
    method: PMethod | str = PMethod.BOTH,
    *,
    tol: float | None = None,
) -> PVerdict:
    """Standard basis: is_p of the truncation. {U e_n}: is_p of U^T T U, witness reported as x = U y."""
    tm = _as_matrix(t, n)
    if basis.is_standard:
        return detect.is_p(tm, method, tol=tol)
    u = basis.unitary
    if u.n != tm.n:
        raise DimensionError(f"Basis size {u.n} does not match n={tm.n}")
    verdict = detect.is_p(conjugate(tm, u, ConjugationSide.UT_T_U, tol=tol), method, tol=tol)
    return _map_witness(verdict, tm, u, tol)


def relative_sign_products(t: Matrix, u: Matrix, x: Vector) -> list:
    """<x, U e_k> <T x, U e_k> for every k."""
    t, u = _common_kind(t, u)
    if x.scalar_kind is not u.scalar_kind:
        x = x.as_float()
    ut = transpose(u)
    coords = matvec(ut, x)
    return sign_products(conjugate(t, u, ConjugationSide.UT_T_U), coords)


def reverses_sign_relative(t: Matrix, u: Matrix, x: Vector, tol: float | None = None) -> bool:
    if tol is None:
        tol = 0 if (t.is_rational and u.is_rational and x.is_rational) else get_settings().tol
    return all(p <= tol for p in relative_sign_products(t, u, x))


def inverse_p_check(t: Matrix, method: PMethod | str = PMethod.BOTH, *, tol: float | None = None) -> PVerdict:
    """is_p of T^{-1}; SingularMatrixError when T is not invertible."""
    return detect.is_p(inverse(t, tol), method, tol=tol)


@dataclass(frozen=True)
class BlockRotationProducts:
    ut: Matrix
    tu: Matrix
    ut_is_scaled_signature: bool
    tu_is_scaled_swap: bool
    commutes: bool

    def as_dict(self) -> dict:
        return {
            "ut_is_scaled_signature": self.ut_is_scaled_signature,
            "tu_is_scaled_swap": self.tu_is_scaled_swap,
            "commutes": self.commutes,
        }


def block_rotation_products(n: int, tol: float | None = None) -> BlockRotationProducts:
    """UT and TU for the block rotation operator and the block Hadamard unitary.

    UT = sqrt(2) diag(1, -1, 1, -1, ...) while TU = sqrt(2) times the blockwise swap.
    """
    t = truncate(OperatorSpec(OperatorKind.BLOCK_ROTATION_MIX), n).as_float()
    u = block_hadamard_unitary(n)
    ut = chop(matmul(u, t), tol)
    tu = chop(matmul(t, u), tol)
    signature = Matrix.diagonal([(-1.0) ** i for i in range(n)], ScalarKind.FLOAT)
    swap = Matrix(np.kron(np.eye(n // 2), np.array([[0.0, 1.0], [1.0, 0.0]])), ScalarKind.FLOAT)
    root2 = math.sqrt(2.0)
    return BlockRotationProducts(
        ut=ut,
        tu=tu,
        ut_is_scaled_signature=matrices_close(ut, scale(signature, root2), tol),
        tu_is_scaled_swap=matrices_close(tu, scale(swap, root2), tol),
        commutes=matrices_close(ut, tu, tol),
    )
