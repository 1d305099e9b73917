from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from tropfact.blades import (
    HeightVector, KinematicForm, eta_of_dosp, eta_of_subset, height_of_subset,
)
from tropfact.combinatorics import is_weakly_separated, parse_dosp
from tropfact.exact import rank
from tropfact.factorization import (
    K4_DICTIONARY, TYPE_I, TYPE_II, AdjacencyError, ChannelSpec, CrossingError,
    cone_generators, eight_gamma_rows, factorization_cone, five_blade_relation, hatx_collection,
    k4_channel_tables, n_collection, positive_fan_in_span, ray_from_noncrossing,
    split3_vector, x_collection,
)
from tropfact.tropical import is_positive_tropical_plucker


def forms(texts):
    return {eta_of_dosp(parse_dosp(t)) for t in texts}


def test_channel_parsing():
    S = ChannelSpec.parse("12|34|56")
    assert (S.k, S.d, S.n) == (3, 3, 6)
    with pytest.raises(ValueError):
        ChannelSpec.parse("13|24|56")


@pytest.mark.parametrize("text,size", [("12|34", 0), ("12|34|56", 3), ("18|23|45|67", 8),
                                       ("1|2|3|4|5|6", 24)])
def test_x_collection_size(text, size):
    S = ChannelSpec.parse(text)
    assert len(x_collection(S)) == size == (S.k - 1) ** 2 - 1


def test_n_collection_examples():
    got = set(n_collection(ChannelSpec.parse("1|23|456")).forms)
    assert got == {eta_of_subset((2, 3, 6), 6), eta_of_subset((1, 3, 6), 6)}
    got = set(n_collection(ChannelSpec.parse("1|23|45|678")).forms)
    assert got == forms(["123_2|45_1|678_1", "6781_2|23_1|45_1", "6781_2|2345_2",
                         "12345_3|678_1", "678123_3|45_1", "456781_3|23_1"])
    got = set(n_collection(ChannelSpec.parse("1|23|4|5678")).forms)
    assert got == forms(["1234_3|5678_1", "56781_2|234_2", "456781_3|23_1"])


@pytest.mark.parametrize("text", ["12|34|56", "1|23|456", "1|23|45|678", "12|3|45|67",
                                  "1|2|34|567", "123|45|6|7|89"])
def test_n_collection_count(text):
    # N together with eta_S; with singleton blocks eta_S is already in N
    S = ChannelSpec.parse(text)
    total = set(n_collection(S).forms) | {eta_of_dosp(S.dosp())}
    assert len(total) == (S.d - 1) * (S.k - 1)


def test_hatx_sizes():
    assert len(hatx_collection(ChannelSpec.parse("12|34"))) == 1
    assert len(hatx_collection(ChannelSpec.parse("18|23|45|67"))) == 11


@st.composite
def three_blocks(draw):
    n = draw(st.integers(4, 9))
    a = draw(st.integers(1, n - 2))
    b = draw(st.integers(a + 1, n - 1))
    r = draw(st.integers(0, n - 1))
    labels = [(x + r) % n + 1 for x in range(n)]
    return ChannelSpec.make([labels[:a], labels[a:b], labels[b:]], n)


@given(three_blocks())
def test_five_blade_relation(S):
    lhs, rhs = five_blade_relation(S)
    assert lhs == rhs


def test_k3_channel_cone():
    C = factorization_cone(ChannelSpec.parse("12|34|56"))
    assert C.f_vector() == [5, 9, 6, 1]


def test_k4_dictionary():
    for J, text in K4_DICTIONARY.items():
        assert eta_of_subset(J, 8) == eta_of_dosp(parse_dosp(text))
    assert eta_of_subset((1, 5, 6, 7), 8) == eta_of_dosp(parse_dosp("18_1|234567_3"))


def test_k4_tables():
    S = ChannelSpec.parse("18|23|45|67")
    I, II = k4_channel_tables(S)
    assert len(TYPE_I) == len(TYPE_II) == 18
    assert len(set(I.forms)) == len(set(II.forms)) == 18
    for kind in ("I", "II"):
        hs = cone_generators(S, kind)
        assert rank([list(h.canonical_coeffs()) for h in hs]) == 9


def test_k4_tables_transport_under_relabelling():
    # (12|34|56|78) is (18|23|45|67) rotated by one
    I, _ = k4_channel_tables(ChannelSpec.parse("12|34|56|78"))
    assert len(set(I.forms)) == 18


@settings(max_examples=10)
@given(st.lists(st.integers(0, 4), min_size=5, max_size=5))
def test_k3_generators_are_positive(coeffs):
    hs = cone_generators(ChannelSpec.parse("12|34|56"))
    h = HeightVector.zero(3, 6)
    for c, g in zip(coeffs, hs):
        h = h + g * c
    assert is_positive_tropical_plucker(h)


def test_span_fan_k4():
    S = ChannelSpec.parse("18|23|45|67")
    F = positive_fan_in_span([__import__("tropfact").blades.height_of_dosp(d)
                              for d in hatx_collection(S)])
    assert len(F.rays) == 29 and len(F.cones) == 4


def test_eight_rows():
    rows = eight_gamma_rows(1, 3, 5, 6)
    assert len(rows) == 8 and len({tuple(r) for r in rows}) == 8
    assert rows[0] == [(1, 3, 5), (1, 2, 5), (1, 3, 4), (3, 5, 6)]
    for r in rows:
        assert r[0] == (1, 3, 5)
        assert all(is_weakly_separated(a, b, 6) for a, b in combinations(r, 2))
    with pytest.raises(AdjacencyError):
        eight_gamma_rows(1, 2, 5, 6)


def test_split3_printed_vector():
    printed = [(2, 9, 15), (3, 9, 15), (4, 6, 15), (4, 7, 15), (4, 8, 15), (4, 9, 11),
               (4, 9, 12), (4, 9, 13), (4, 9, 14), (4, 9, 15)]
    h, T = split3_vector(4, 9, 15, 15, terms=True)
    assert sorted(T) == sorted(printed)
    want = HeightVector.zero(3, 15)
    for J in printed:
        want = want + height_of_subset(J, 15)
    assert h == want
    assert all(is_weakly_separated(a, b, 15) for a, b in combinations(T, 2))


def test_split3_minimal():
    assert split3_vector(1, 3, 5, 6) == height_of_subset((1, 3, 5), 6)


def test_ray_two_roots():
    r = ray_from_noncrossing([(1, 6, 9), (2, 5, 10)], 12)
    assert r.expansion == {(1, 5, 9): -1, (1, 5, 10): 1, (1, 6, 9): 1, (2, 5, 9): 1}
    assert r.cells == 6 and r.is_ray


def test_ray_three_roots():
    r = ray_from_noncrossing([(1, 4, 6, 7), (2, 3, 6, 8), (2, 4, 5, 8)], 8)
    assert r.expansion == {
        (1, 3, 5, 7): 1, (1, 3, 5, 8): -1, (1, 3, 6, 7): -1, (1, 3, 6, 8): 1,
        (1, 4, 5, 7): -1, (1, 4, 5, 8): 1, (1, 4, 6, 7): 1, (2, 3, 5, 7): -1,
        (2, 3, 5, 8): 1, (2, 3, 6, 7): 1, (2, 4, 5, 7): 1}
    assert r.is_ray


def test_ray_rejects_crossing():
    with pytest.raises(CrossingError):
        ray_from_noncrossing([(1, 3, 5), (2, 4, 6)], 6)


def test_forms_are_canonical():
    a = KinematicForm.from_height(height_of_subset((1, 3, 5), 6))
    assert a == eta_of_subset((1, 3, 5), 6)
