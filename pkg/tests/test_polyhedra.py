from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tropfact.blades import HeightVector, height_of_dosp, height_of_subset
from tropfact.combinatorics import parse_dosp, subsets
from tropfact.polyhedra import (
    ConeError, cone_from_generators, cone_from_inequalities, dual_graph, is_coarsest,
    is_matroidal, is_positroidal, lower_hull_oracle, minkowski_vertices, newton_face,
    polytope_f_vector, product_f_vector, secondary_dimension, subdivision_from_height,
)
from tropfact.tropical import GridVector, trop_plucker


def test_orthant():
    C = cone_from_inequalities([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert len(C.facets) == 3 and len(C.rays) == 3
    assert C.f_vector() == [3, 3, 1]


def test_square_cone():
    C = cone_from_generators([[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]])
    assert C.f_vector() == [4, 4, 1]
    assert C.contains([0, 0, 1]) and not C.contains([0, 0, -1])


def test_redundant_generator_dropped():
    C = cone_from_generators([[1, 0], [0, 1], [1, 1], [2, 0]])
    assert sorted(C.ambient_rays()) == [(0, 1), (1, 0)]


def test_line_rejected():
    with pytest.raises(ConeError):
        cone_from_generators([[1, 0], [-1, 0], [0, 1]])


def test_lower_dimensional_cone():
    C = cone_from_generators([[1, 1, 0], [0, 1, 1]])
    assert C.dim == 2 and C.f_vector() == [2, 1]


def test_trivial_subdivision():
    sub = subdivision_from_height(HeightVector.zero(3, 6))
    assert len(sub.cells) == 1 and not is_coarsest(sub)


def test_split_has_two_cells():
    sub = subdivision_from_height(height_of_subset((1, 3), 5))
    assert len(sub.cells) == 2
    assert is_positroidal(sub) and is_coarsest(sub)


def test_three_split():
    h = height_of_dosp(parse_dosp("12_1|34_1|56_1"))
    sub = subdivision_from_height(h)
    assert len(sub.cells) == 3
    assert sub.same_cells(lower_hull_oracle(h))
    assert is_matroidal(sub) and is_coarsest(h)
    assert dual_graph(sub).number_of_edges() == 3


def test_sum_of_compatible_splits_is_not_coarsest():
    h = height_of_subset((1, 3, 5), 6) + height_of_subset((1, 3, 6), 6)
    sub = subdivision_from_height(h)
    assert is_positroidal(sub)
    assert secondary_dimension(sub) > 7
    assert not is_coarsest(h)


@settings(max_examples=15)
@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_plates_agree_with_oracle(e):
    h = trop_plucker(GridVector(3, 6, tuple(e)))
    sub = subdivision_from_height(h)
    assert sub.same_cells(lower_hull_oracle(h))
    assert is_positroidal(sub)


def test_non_positive_height_is_not_matroidal():
    h = height_of_subset((1, 3, 5), 6) + height_of_subset((2, 4, 6), 6)
    assert not is_matroidal(lower_hull_oracle(h))


def test_minkowski_of_segments_is_square():
    V = minkowski_vertices([[(0, 0), (1, 0)], [(0, 0), (0, 1)]])
    assert sorted(V) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert polytope_f_vector(V) == [4, 4, 1]


def test_product_f_vector():
    # segment times segment is a square
    assert product_f_vector((2, 1), (2, 1)) == [4, 4, 1]


def test_newton_polytope_dimension():
    assert newton_face(3, 6).dim == 4
    assert list(newton_face(2, 5, with_f_vector=True).f_vector) == [5, 5, 1]
