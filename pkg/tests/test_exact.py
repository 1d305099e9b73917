from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropfact.exact import (
    DimensionError, det, format_q, inverse, nullspace, parse_q, primitive, rank, rref, solve,
)

small = st.integers(-6, 6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_solve_identity():
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert solve(I3, [1, 2, 3]) == [1, 2, 3]


def test_solve_inconsistent():
    assert solve([[1, 1], [1, 1]], [1, 2]) is None


def test_solve_diagonal():
    assert solve([[2, 0], [0, 3]], [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]


def test_nullspace_examples():
    (v,) = nullspace([[1, 1]])
    assert v[0] + v[1] == 0 and any(v)
    assert nullspace([[1, 0], [0, 1]]) == []
    (w,) = nullspace([[1, 2], [2, 4]])
    assert w[0] == -2 * w[1]


def test_ragged_matrix_rejected():
    with pytest.raises(DimensionError):
        rank([[1, 2], [3]])


def test_float_rejected():
    with pytest.raises(TypeError):
        rank([[0.5]])


def test_format_parse_roundtrip():
    for x in (Fraction(3, 7), Fraction(-5), Fraction(0)):
        assert parse_q(format_q(x)) == x
    assert format_q(Fraction(4, 2)) == "2"


def test_primitive():
    assert primitive([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    assert primitive([0, 0]) == (0, 0)


@given(matrices(3, 4))
def test_rank_nullity(A):
    assert rank(A) + len(nullspace(A)) == 4
    for v in nullspace(A):
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)


@given(matrices(3, 3))
def test_inverse_or_singular(A):
    if det(A):
        B = inverse(A)
        prod = [[sum(A[i][t] * B[t][j] for t in range(3)) for j in range(3)] for i in range(3)]
        assert prod == [[int(i == j) for j in range(3)] for i in range(3)]
    else:
        assert rank(A) < 3
        with pytest.raises(ZeroDivisionError):
            inverse(A)


@given(matrices(3, 5))
def test_rref_is_idempotent(A):
    R, piv = rref(A)
    R2, piv2 = rref(R, 5)
    assert piv == piv2 and R2 == R
