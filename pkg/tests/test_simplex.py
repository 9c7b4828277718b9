from __future__ import annotations

from fractions import Fraction

import pytest

from pmatrix_toolkit.simplex import LpStatus, TableauSimplex, solve_lp


def test_two_variable_optimum_is_exact():
    res = solve_lp([1, 1], a_ub=[[1, 2], [3, 1]], b_ub=[4, 6], exact=True)
    assert res.status is LpStatus.OPTIMAL
    assert res.x == (Fraction(8, 5), Fraction(6, 5))


def test_float_mode_agrees_with_exact_mode():
    res = solve_lp([1, 1], a_ub=[[1, 2], [3, 1]], b_ub=[4, 6], exact=False)
    assert res.is_optimal
    assert res.x == pytest.approx((1.6, 1.2), abs=1e-9)


def test_equality_with_contradicting_inequality_is_infeasible():
    res = solve_lp([0, 0], a_ub=[[1, 1]], b_ub=[0], a_eq=[[1, 1]], b_eq=[1], exact=True)
    assert res.status is LpStatus.INFEASIBLE
    assert res.x is None


def test_unbounded_direction():
    res = solve_lp([1, 0], a_ub=[[-1, 1]], b_ub=[1], exact=True)
    assert res.status is LpStatus.UNBOUNDED


def test_negative_right_hand_side_becomes_a_lower_bound():
    # x >= 1 written as -x <= -1; maximize -x
    res = solve_lp([-1], a_ub=[[-1]], b_ub=[-1], exact=True)
    assert res.x == (Fraction(1),)


def test_bland_rule_terminates_on_a_cycling_example():
    # degenerate problem on which the largest-coefficient rule cycles
    c = [Fraction(3, 4), -20, Fraction(1, 2), -6]
    a_ub = [
        [Fraction(1, 4), -8, -1, 9],
        [Fraction(1, 2), -12, Fraction(-1, 2), 3],
        [0, 0, 1, 0],
    ]
    res = TableauSimplex(exact=True).solve(c, a_ub=a_ub, b_ub=[0, 0, 1])
    assert res.is_optimal
    value = sum(ci * xi for ci, xi in zip(c, res.x))
    assert value == Fraction(5, 4)


def test_redundant_equality_rows_are_dropped():
    res = solve_lp([1, 0], a_eq=[[1, 1], [2, 2]], b_eq=[1, 2], exact=True)
    assert res.is_optimal
    assert res.x == (Fraction(1), Fraction(0))
