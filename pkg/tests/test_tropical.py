from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tropfact.blades import HeightVector, height_of_subset
from tropfact.combinatorics import subsets
from tropfact.tropical import (
    GridVector, build_monomial_table, gamma_value, is_positive_tropical_plucker,
    positive_root_vector, proj_rt, three_term_violations, trop_plucker,
)


def test_monomial_table_small():
    T = build_monomial_table(2, 4)
    # p_13 has the single monomial m_{1,1}
    assert len(T.monomials[(1, 3)]) == 1
    assert all(len(T.monomials[J]) >= 1 for J in T.monomials)


def test_monomial_table_36_sign_coherent():
    T = build_monomial_table(3, 6)
    assert len(T.monomials) == 20
    assert set(T.sign.values()) <= {1, -1}


def test_trop_of_zero_is_zero():
    pi = trop_plucker(GridVector.zero(3, 6))
    assert not any(pi.coeffs)


def test_positivity_counterexample():
    h = height_of_subset((1, 3, 5), 6) + height_of_subset((2, 4, 6), 6)
    assert not is_positive_tropical_plucker(h)
    assert three_term_violations(h)


def test_single_planar_height_is_positive():
    assert is_positive_tropical_plucker(height_of_subset((1, 3, 5), 6))


def test_root_support():
    v = positive_root_vector((1, 3, 5), 6)
    assert v.rows() == [(1, 0, 0), (0, 1, 0)]
    with pytest.raises(ValueError):
        positive_root_vector((1, 2, 3), 6)


def test_gamma_value():
    alpha = GridVector.from_rows([[1, 2, 3], [4, 5, 6]], 6)
    assert gamma_value((1, 3, 5), alpha) == 1 + 5


grids = st.sampled_from([(2, 5), (3, 6), (3, 7), (4, 8)]).flatmap(
    lambda kn: st.builds(lambda e: GridVector(kn[0], kn[1], tuple(e)),
                         st.lists(st.integers(-8, 8), min_size=(kn[0] - 1) * (kn[1] - kn[0]),
                                  max_size=(kn[0] - 1) * (kn[1] - kn[0]))))


@given(grids)
def test_trop_is_positive(y):
    assert is_positive_tropical_plucker(trop_plucker(y))


@given(grids, st.integers(1, 4))
def test_trop_is_homogeneous(y, lam):
    assert trop_plucker(y * lam) == trop_plucker(y) * lam


@given(grids)
def test_proj_inverts_trop(y):
    # equality holds on the torus quotient, i.e. after fixing the gauge
    assert proj_rt(trop_plucker(y)).gauge_fixed() == y.gauge_fixed()


@given(grids, st.integers(-5, 5))
def test_row_shift_changes_trop_by_lineality(y, c):
    w = y.n - y.k
    shifted = GridVector(y.k, y.n, tuple(x + (c if i < w else 0) for i, x in enumerate(y.entries)))
    assert (trop_plucker(shifted) - trop_plucker(y)).is_zero_mod_lineality()


def test_proj_kills_lineality():
    lin = HeightVector.from_dict(3, 6, {J: F(sum(J)) for J in subsets(3, 6)})
    assert not any(proj_rt(lin).entries)
