"""Tests for the exact simplex and the strict feasibility helper."""

from fractions import Fraction

from movstab.exact_lp import INFEASIBLE, OPTIMAL, UNBOUNDED, maximize, strict_interior_point
from movstab.utils import dot


def test_maximize_small_program():
    # max x + y  s.t.  x + 2y + s = 4,  3x + y + t = 6
    result = maximize([1, 1, 0, 0], [[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6])
    assert result.status == OPTIMAL
    assert result.value == Fraction(14, 5)
    assert result.x[:2] == (Fraction(8, 5), Fraction(6, 5))


def test_maximize_infeasible():
    assert maximize([1], [[1]], [-1]).status == INFEASIBLE


def test_maximize_unbounded():
    assert maximize([1, 0], [[1, -1]], [0]).status == UNBOUNDED


def test_maximize_terminates_on_cycling_example():
    third = Fraction(1, 2)
    quarter = Fraction(1, 4)
    c = [0, 0, 0, Fraction(3, 4), -20, third, -6]
    A = [
        [1, 0, 0, quarter, -8, -1, 9],
        [0, 1, 0, third, -12, -third, 3],
        [0, 0, 1, 0, 0, 1, 0],
    ]
    result = maximize(c, A, [0, 0, 1])
    assert result.status == OPTIMAL
    assert result.value == Fraction(5, 4)
    for row, rhs in zip(A, [0, 0, 1]):
        assert dot(row, result.x) == rhs


def test_maximize_with_redundant_equalities():
    result = maximize([1, 0], [[1, 1], [2, 2]], [3, 6])
    assert result.status == OPTIMAL
    assert result.value == 3


def test_strict_interior_point_found():
    x = strict_interior_point([[1, 0], [0, 1]], [[1, -1]], 2)
    assert x is not None
    assert x[0] == x[1] > 0


def test_strict_interior_point_absent():
    assert strict_interior_point([[1, 0], [-1, 0]], [], 2) is None
    assert strict_interior_point([[1, 0], [0, 1]], [[1, 1]], 2) is None


def test_strict_interior_point_without_functionals():
    x = strict_interior_point([], [[1, 1]], 2)
    assert x is not None
    assert x[0] + x[1] == 0
