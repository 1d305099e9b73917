from math import comb

from hypothesis import given, strategies as st

from tropfact.combinatorics import (
    DOSP, cyclic_decomposition, dosp_of_subset, enumerate_nonfrozen, incompatibility_graph,
    is_frozen, is_noncrossing, is_weakly_separated, pairwise_weakly_separated, parse_dosp,
    subset_of_dosp, subsets,
)


def test_nonfrozen_counts():
    assert enumerate_nonfrozen(2, 4) == ((1, 3), (2, 4))
    assert len(enumerate_nonfrozen(3, 6)) == 14
    assert len(enumerate_nonfrozen(4, 8)) == 62


def test_frozen_wraps_around():
    assert is_frozen((1, 2, 6), 6)
    assert not is_frozen((1, 3, 6), 6)


def test_dosp_of_subset_examples():
    assert dosp_of_subset((2, 4, 6), 7) == parse_dosp("712_1|34_1|56_1")
    assert dosp_of_subset((2, 5, 8, 9), 9) == parse_dosp("12_1|345_1|6789_2")
    assert dosp_of_subset((3, 5, 6), 6) == parse_dosp("123_1|456_2")


def test_subset_of_dosp_examples():
    assert subset_of_dosp(parse_dosp("123_1|456_2")) == (3, 5, 6)
    assert subset_of_dosp(parse_dosp("712_1|34_1|56_1")) == (2, 4, 6)
    assert subset_of_dosp(parse_dosp("12_1|345_1|6789_2")) == (2, 5, 8, 9)


def test_dosp_rotation_is_canonical():
    a = DOSP.make([(3, 4), (5, 6), (1, 2)], [1, 1, 1], 6)
    b = DOSP.make([(1, 2), (3, 4), (5, 6)], [1, 1, 1], 6)
    assert a == b and a.label() == "(12_1 34_1 56_1)"


def test_frozen_subset_gives_one_block():
    d = dosp_of_subset((2, 3, 4), 6)
    assert d.d == 1 and d.r == (3,)


def test_weak_separation_examples():
    assert is_weakly_separated((1, 2, 4), (1, 3, 4), 4)
    assert not is_weakly_separated((1, 3, 5), (2, 4, 6), 6)
    assert not is_weakly_separated((1, 6, 9), (2, 5, 10), 12)


def test_noncrossing_examples():
    assert is_noncrossing((1, 6, 9), (2, 5, 10), 12)
    assert is_noncrossing((1, 4, 6, 7), (2, 3, 6, 8), 8)


def test_incompatibility_graphs():
    G = incompatibility_graph([(1, 6, 9), (2, 5, 10)], 12)
    assert G.number_of_edges() == 1
    G = incompatibility_graph([(1, 8, 9), (2, 7, 10), (3, 6, 11), (4, 5, 12)], 12)
    assert G.number_of_edges() == 6
    G = incompatibility_graph([(1, 2, 4), (1, 3, 4), (1, 2, 5)], 6)
    assert G.number_of_edges() == 0


@st.composite
def kn_subset(draw):
    n = draw(st.integers(4, 11))
    k = draw(st.integers(2, n - 2))
    J = tuple(sorted(draw(st.sets(st.integers(1, n), min_size=k, max_size=k))))
    return k, n, J


@given(kn_subset())
def test_bijection_roundtrip(data):
    k, n, J = data
    d = dosp_of_subset(J, n)
    assert d.k == k
    if not is_frozen(J, n):
        assert d.is_type_delta()
        assert subset_of_dosp(d) == J
        assert d.d == len(cyclic_decomposition(J, n).intervals)


@given(kn_subset(), st.data())
def test_weak_separation_symmetric_and_implies_noncrossing(data, more):
    k, n, I = data
    J = tuple(sorted(more.draw(st.sets(st.integers(1, n), min_size=k, max_size=k))))
    ws = is_weakly_separated(I, J, n)
    assert ws == is_weakly_separated(J, I, n)
    # complements preserve weak separation
    full = set(range(1, n + 1))
    Ic, Jc = tuple(sorted(full - set(I))), tuple(sorted(full - set(J)))
    assert ws == is_weakly_separated(Ic, Jc, n)
    if ws:
        assert is_noncrossing(I, J, n)


def test_maximal_weakly_separated_size():
    # a maximal weakly separated collection in (2,6) has k(n-k)+1 = 9 elements
    # including frozen ones; the triangulation 13,14,15 plus frozen has 9
    coll = [(1, 3), (1, 4), (1, 5)] + [(j, j % 6 + 1) if j < 6 else (1, 6) for j in range(1, 7)]
    assert pairwise_weakly_separated(coll, 6)
    assert len(subsets(2, 6)) == comb(6, 2)
