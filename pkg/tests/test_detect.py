from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pmatrix_toolkit import detect
from pmatrix_toolkit.detect import (
    AllMinorsPositive,
    NonPositiveMinor,
    NoSignReversal,
    PMethod,
    SignPattern,
    SignReversalWitness,
    diagonal_blocks,
    find_sign_reversal_witness,
    is_p,
    is_p_by_minors,
    is_positive_definite,
    normalize_witness,
    orthant_feasible,
    principal_minors,
    quadratic_form,
    reverses_sign,
    sign_products,
)
from pmatrix_toolkit.errors import CapExceededError, DimensionError, MethodDisagreementError
from pmatrix_toolkit.linalg import IndexSet, Matrix, ScalarKind, Vector, determinant, principal_submatrix, scale, transpose
from pmatrix_toolkit.structure import VerdictModel


def _int_matrix(n):
    return arrays(np.int64, (n, n), elements=st.integers(-3, 3)).map(
        lambda arr: Matrix(arr.astype(object), ScalarKind.RATIONAL)
    )


int_matrices = st.integers(1, 4).flatmap(_int_matrix)


class TestPrincipalMinors:
    def test_identity_minors_are_all_one(self):
        minors = principal_minors(Matrix.identity(2))
        assert [(s.indices, v) for s, v in minors] == [((1,), 1), ((2,), 1), ((1, 2), 1)]

    def test_cap(self):
        with pytest.raises(CapExceededError):
            principal_minors(Matrix.identity(5), cap=4)


class TestMinorsRoute:
    def test_identity_is_p(self, identity3):
        verdict = is_p_by_minors(identity3)
        assert verdict.is_p
        assert verdict.certificate == AllMinorsPositive(7, 3)

    def test_first_violation_is_the_smallest_set(self, swap2):
        verdict = is_p_by_minors(swap2)
        assert not verdict.is_p
        assert verdict.certificate.indices == IndexSet.of(1)
        assert verdict.certificate.value == 0

    def test_full_minor_violation(self, i2_minus):
        cert = is_p_by_minors(i2_minus).certificate
        assert cert == NonPositiveMinor(IndexSet.of(1, 2), Fraction(-3))

    def test_rational_entries(self, rational_p):
        assert is_p_by_minors(rational_p).is_p

    def test_float_minor_near_zero_is_a_boundary(self):
        a = Matrix.from_rows([[1.0, 1.0], [1.0, 1.0 + 1e-13]])
        verdict = is_p_by_minors(a)
        assert not verdict.is_p
        assert verdict.boundary

    def test_exact_zero_minor_is_not_a_boundary(self):
        verdict = is_p_by_minors(Matrix.from_rows([[1, 1], [1, 1]]))
        assert not verdict.is_p and not verdict.boundary

    def test_cap_applies_to_the_largest_block(self):
        dense = Matrix.from_rows([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
        with pytest.raises(CapExceededError):
            is_p_by_minors(dense, cap=2)
        assert is_p_by_minors(Matrix.identity(30), cap=2).is_p


class TestDiagonalBlocks:
    def test_lower_triangular_splits_into_singletons(self):
        a = Matrix.from_rows([[1, 0, 0], [2, 1, 0], [0, 2, 1]])
        assert [b.indices for b in diagonal_blocks(a)] == [(1,), (2,), (3,)]

    def test_block_diagonal(self):
        a = Matrix.from_rows([[1, -1, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 1, 1]])
        assert [b.indices for b in diagonal_blocks(a)] == [(1, 2), (3, 4)]

    def test_full_matrix_is_one_block(self):
        assert len(diagonal_blocks(Matrix.from_rows([[1, 1], [1, 1]]))) == 1

    def test_later_block_wins_only_with_a_smaller_set(self):
        # block {1,2} fails at {1,2}; block {3} fails at {3}, the smaller set
        a = Matrix.from_rows([[1, 2, 0], [2, 1, 0], [0, 0, -1]])
        assert is_p_by_minors(a).certificate.indices == IndexSet.of(3)

    @given(int_matrices, int_matrices)
    def test_block_certificate_matches_full_enumeration(self, top, bottom):
        n = top.n + bottom.n
        grid = np.zeros((n, n), dtype=object)
        grid[: top.n, : top.n] = top.entries
        grid[top.n :, top.n :] = bottom.entries
        grid[top.n :, : top.n] = 1
        a = Matrix(grid, ScalarKind.RATIONAL)
        first = next(((s, v) for s, v in principal_minors(a) if v <= 0), None)
        verdict = is_p_by_minors(a)
        if first is None:
            assert verdict.is_p
        else:
            assert verdict.certificate == NonPositiveMinor(*first)


class TestSignReversal:
    def test_swap_witness(self, swap2):
        assert find_sign_reversal_witness(swap2) == Vector.of([1, -1])

    def test_identity_has_no_witness(self, identity3):
        assert find_sign_reversal_witness(identity3) is None

    def test_sign_products(self, swap2):
        assert sign_products(swap2, Vector.of([1, -1])) == [-1, -1]
        assert reverses_sign(swap2, Vector.of([1, -1]))
        assert not reverses_sign(swap2, Vector.of([1, 1]))

    def test_sign_products_dimension(self, swap2):
        with pytest.raises(DimensionError):
            sign_products(swap2, Vector.of([1, 2, 3]))

    def test_orthant_point_is_centred(self, swap2):
        x = orthant_feasible(swap2, SignPattern((1, -1)))
        assert x == Vector.of([Fraction(1, 2), Fraction(-1, 2)])

    def test_infeasible_orthant(self, swap2):
        assert orthant_feasible(swap2, SignPattern((1, 1))) is None

    def test_pattern_from_index(self):
        assert SignPattern.from_index(0b101, 3).signs == (-1, 1, -1)
        assert str(SignPattern.from_index(2, 2)) == "(+,-)"

    def test_normalize_fixes_scale_and_sign(self):
        x = normalize_witness(Vector.of([0, -2, 1]))
        assert x == Vector.of([0, 1, Fraction(-1, 2)])

    def test_normalize_chops_float_noise(self):
        x = normalize_witness(Vector.of([1e-15, -0.5, 0.25]))
        assert x.tolist() == [0.0, 1.0, -0.5]

    def test_normalize_chops_residue_of_the_lexicographic_stages(self):
        x = normalize_witness(Vector.of([1.0, -1.0, 1.0000000837e-9, -1.0000000837e-9]), 1e-9)
        assert x.tolist() == [1.0, -1.0, 0.0, 0.0]

    def test_normalize_can_keep_small_entries(self):
        x = normalize_witness(Vector.of([1.0, -1.0, 1e-9, 0.0]), 1e-9, chop_noise=False)
        assert x.tolist() == [1.0, -1.0, 1e-9, 0.0]

    def test_zero_vector_is_not_a_witness(self):
        with pytest.raises(ValueError):
            normalize_witness(Vector.of([0, 0]))

    def test_witness_cap(self):
        with pytest.raises(CapExceededError):
            find_sign_reversal_witness(Matrix.identity(4), cap=3)


class TestIsP:
    def test_both_on_identity(self, identity3):
        verdict = is_p(identity3, "both")
        assert verdict.is_p and verdict.method is PMethod.BOTH
        assert isinstance(verdict.certificate, AllMinorsPositive)
        assert verdict.witness is None

    def test_both_on_swap_attaches_witness(self, swap2):
        verdict = is_p(swap2, PMethod.BOTH)
        assert isinstance(verdict.certificate, NonPositiveMinor)
        assert verdict.witness == SignReversalWitness(Vector.of([1, -1]))

    def test_sign_reversal_only(self, identity3, swap2):
        assert is_p(identity3, "sign-reversal").certificate == NoSignReversal(4)
        assert is_p(swap2, "sign_reversal").certificate == SignReversalWitness(Vector.of([1, -1]))

    def test_disagreement_is_raised(self, swap2, monkeypatch):
        monkeypatch.setattr(detect, "find_sign_reversal_witness", lambda *a, **k: None)
        with pytest.raises(MethodDisagreementError):
            is_p(swap2, PMethod.BOTH)

    def test_verdict_serializes_through_the_schema(self, swap2):
        payload = is_p(swap2).as_dict()
        model = VerdictModel.model_validate(payload)
        assert model.certificate.kind == "minor"
        assert model.witness.vector == ["1", "-1"]

    @given(int_matrices)
    def test_routes_agree(self, a):
        verdict = is_p(a, PMethod.BOTH)
        if isinstance(verdict.certificate, NonPositiveMinor):
            cert = verdict.certificate
            assert cert.value <= 0
            assert determinant(principal_submatrix(a, cert.indices)) == cert.value
        x = verdict.witness_vector()
        assert verdict.is_p == (x is None)
        if x is not None:
            assert not x.is_zero()
            assert reverses_sign(a, x)

    @given(int_matrices)
    def test_transpose_is_p_iff_matrix_is_p(self, a):
        assert is_p_by_minors(a).is_p == is_p_by_minors(transpose(a)).is_p

    @given(int_matrices, st.fractions(min_value=Fraction(1, 100), max_value=100))
    def test_positive_scaling_keeps_the_verdict(self, a, c):
        assert is_p(scale(a, c), PMethod.BOTH).is_p == is_p(a, PMethod.BOTH).is_p


class TestPositiveDefinite:
    def test_p_but_not_positive_definite(self):
        a = Matrix.from_rows([[1, -7], [0, 1]])
        assert is_p(a).is_p
        assert not is_positive_definite(a)
        assert quadratic_form(a, Vector.of([1, 1])) == -5

    def test_skew_part_does_not_matter(self):
        a = Matrix.from_rows([[2, 3], [-3, 2]])
        assert is_positive_definite(a)

    def test_float_quadratic_form(self):
        a = Matrix.from_rows([[2.0, 0.0], [0.0, 3.0]])
        assert quadratic_form(a, Vector.of([1.0, 1.0])) == pytest.approx(5.0)
