"""Seeded random matrices for the property suites.

Every generator takes an explicit ``numpy.random.Generator``; nothing here
touches global random state.
"""
from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np
from scipy.stats import ortho_group, special_ortho_group

from .detect import is_p_by_minors
from .linalg import Matrix, ScalarKind, add, matmul, scale, to_fraction, transpose

logger = logging.getLogger(__name__)


def random_integer_matrix(rng: np.random.Generator, n: int, low: int = -3, high: int = 3) -> Matrix:
    """Entries uniform on the integers low..high, exact rational kind."""
    return Matrix(rng.integers(low, high + 1, size=(n, n)).astype(object), ScalarKind.RATIONAL)


def _dominant(rng: np.random.Generator, n: int) -> Matrix:
    # strictly row diagonally dominant with positive diagonal
    a = rng.integers(-3, 4, size=(n, n))
    np.fill_diagonal(a, 0)
    a[np.diag_indices(n)] = np.abs(a).sum(axis=1) + rng.integers(1, 4, size=n)
    return Matrix(a.astype(object), ScalarKind.RATIONAL)


def _pd_plus_skew(rng: np.random.Generator, n: int) -> Matrix:
    # x^T (S + K) x = x^T S x > 0 for S positive definite, K skew
    b = rng.integers(-2, 3, size=(n, n))
    c = rng.integers(-2, 3, size=(n, n))
    a = b.T @ b + np.eye(n, dtype=int) + (c - c.T)
    return Matrix(a.astype(object), ScalarKind.RATIONAL)


def random_p_matrix(rng: np.random.Generator, n: int, max_tries: int = 200) -> Matrix:
    """A P-matrix drawn from one of three constructions, chosen by the generator.

    Rejection sampling of [-3, 3] integer matrices is tried first for small n, then
    diagonally dominant and positive-definite-plus-skew matrices. The result is
    always confirmed by the minors test.
    """
    strategy = int(rng.integers(3))
    candidate = None
    if strategy == 0 and n <= 3:
        for _ in range(max_tries):
            a = random_integer_matrix(rng, n)
            if is_p_by_minors(a).is_p:
                candidate = a
                break
    if candidate is None:
        candidate = _pd_plus_skew(rng, n) if strategy == 2 else _dominant(rng, n)
    if not is_p_by_minors(candidate).is_p:
        raise AssertionError(f"constructed matrix is not P: {candidate!r}")
    return candidate


def random_spd(rng: np.random.Generator, n: int, eps=Fraction(1, 10), low: int = -3, high: int = 3) -> Matrix:
    """B^T B + eps I with integer B; exact rational."""
    b = random_integer_matrix(rng, n, low, high)
    return add(matmul(transpose(b), b), scale(Matrix.identity(n), to_fraction(eps)))


def random_orthogonal(rng: np.random.Generator, n: int) -> Matrix:
    """Haar-distributed orthogonal matrix (determinant +1 or -1)."""
    if n == 1:
        return Matrix([[float(rng.choice([-1.0, 1.0]))]], ScalarKind.FLOAT)
    return Matrix(ortho_group.rvs(dim=n, random_state=rng), ScalarKind.FLOAT)


def random_rotation(rng: np.random.Generator, n: int) -> Matrix:
    """Haar-distributed rotation (determinant +1)."""
    if n == 1:
        return Matrix([[1.0]], ScalarKind.FLOAT)
    return Matrix(special_ortho_group.rvs(dim=n, random_state=rng), ScalarKind.FLOAT)


def commuting_polynomial(rng: np.random.Generator, u: Matrix, coeffs=None) -> Matrix:
    """c0 I + c1 U + c2 U^2, which commutes with U; coefficients uniform on [-2, 2] unless given."""
    if coeffs is None:
        coeffs = rng.uniform(-2.0, 2.0, size=3)
    c0, c1, c2 = (float(c) for c in coeffs)
    fu = u.as_float()
    eye = np.eye(u.n)
    arr = c0 * eye + c1 * fu.entries + c2 * (fu.entries @ fu.entries)
    return Matrix(arr, ScalarKind.FLOAT)
