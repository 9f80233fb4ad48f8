from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from morsegrad.complex import (
    ComplexError,
    CycleBasis,
    LefschetzComplex,
    SimplicialComplex,
    boundary_matrix,
    euler_characteristic,
    facets,
    homology_dims,
    make_simplex,
    relative_homology_dims,
)
from morsegrad.generators import random_complex
from morsegrad.instances import DUNCE_HAT_TRIANGLES
from oracles import dense_homology, dense_relative_homology

SQUARE = SimplicialComplex([(0, 1), (1, 2), (2, 3), (0, 3)], closure=True)


def complexes(max_dim=3):
    return st.tuples(st.integers(0, 10**6), st.integers(2, 8), st.integers(1, max_dim)).map(
        lambda t: random_complex(random.Random(t[0]), t[1], t[2], 0.35)
    )


def test_facets_follow_deleted_vertex_order():
    assert facets((1, 2, 5)) == [(2, 5), (1, 5), (1, 2)]
    assert facets((7,)) == []
    assert facets((2, 3, 5)) == [(3, 5), (2, 5), (2, 3)]


def test_make_simplex_validation():
    assert make_simplex([3, 1]) == (1, 3)
    with pytest.raises(ComplexError):
        make_simplex([1, 1])
    with pytest.raises(ComplexError):
        make_simplex([])
    with pytest.raises(ComplexError):
        make_simplex([-1])


def test_missing_face_is_rejected_without_closure():
    with pytest.raises(ComplexError, match="missing face"):
        SimplicialComplex([(0, 1)])
    assert SimplicialComplex([(0, 1)], closure=True).f_vector() == [2, 1]


def test_cell_order_is_dimension_then_lexicographic():
    K = SimplicialComplex([(0, 2), (0, 1)], closure=True)
    assert K.cells() == ((0,), (1,), (2,), (0, 1), (0, 2))


def test_boundary_matrix_of_square():
    D = boundary_matrix(SQUARE, 1)
    assert D.shape == (4, 4)
    assert all(bin(c).count("1") == 2 for c in D.columns)


def test_boundary_matrix_in_degree_zero_has_no_rows():
    assert boundary_matrix(SQUARE, 0).shape == (0, 4)
    assert boundary_matrix(SQUARE, 5).shape == (0, 0)


def test_boundary_of_triangle():
    K = SimplicialComplex([(0, 1, 3)], closure=True)
    D = boundary_matrix(K, 2)
    rows = K.cells(1)
    assert D.shape == (3, 1)
    assert {rows[i] for i, _ in D.entries} == {(0, 1), (1, 3), (0, 3)}


def test_homology_examples():
    assert homology_dims(SQUARE) == [1, 1]
    assert homology_dims(SimplicialComplex([(0,), (1,)])) == [2]
    hat = SimplicialComplex(DUNCE_HAT_TRIANGLES, closure=True)
    assert hat.f_vector() == [8, 24, 17]
    assert homology_dims(hat) == [1, 0, 0]


def test_dunce_hat_has_no_free_edge():
    hat = SimplicialComplex(DUNCE_HAT_TRIANGLES, closure=True)
    assert all(len(hat.cofacets(e)) >= 2 for e in hat.cells(1))


def test_relative_homology_examples():
    assert relative_homology_dims(SQUARE, []) == homology_dims(SQUARE)
    assert relative_homology_dims(SQUARE, SQUARE.cells()) == [0, 0]
    Ku = {(0,), (1,), (2,), (0, 1), (1, 2)}
    assert relative_homology_dims(SQUARE, {(0,), (2,)}, within=Ku) == [0, 1]


def test_relative_homology_errors():
    with pytest.raises(ComplexError, match="face-closed"):
        relative_homology_dims(SQUARE, {(0, 1)})
    with pytest.raises(ComplexError, match="not contained"):
        relative_homology_dims(SQUARE, {(0,)}, within={(1,)})


@given(complexes())
def test_boundary_squares_to_zero(K):
    for q in range(1, K.dimension + 1):
        assert (boundary_matrix(K, q) @ boundary_matrix(K, q + 1)).is_zero()


@given(complexes(2))
def test_cones_are_acyclic(K):
    apex = max(K.vertices) + 1
    cone = SimplicialComplex([s + (apex,) for s in K.cells()] + [(apex,)], closure=True)
    assert homology_dims(cone) == [1] + [0] * cone.dimension


@given(complexes())
def test_euler_characteristic(K):
    h = homology_dims(K)
    assert euler_characteristic(K) == sum((-1) ** q * b for q, b in enumerate(h))


@given(complexes(), st.randoms(use_true_random=False))
def test_relative_homology_matches_dense_oracle(K, rnd):
    cells = list(K.cells())
    picked = {s for s in cells if rnd.random() < 0.4}
    # close the random choice downward to get a subcomplex
    A = SimplicialComplex(picked, closure=True).cells() if picked else ()
    assert relative_homology_dims(K, A) == dense_relative_homology(cells, A)
    assert homology_dims(K) == dense_homology(cells)


def test_lefschetz_validation():
    LefschetzComplex({"v": 0, "e": 1}, {"e": ["v", "v"]})  # multiset collapses to one entry
    with pytest.raises(ComplexError, match="drop dimension"):
        LefschetzComplex({"v": 0, "t": 2}, {"t": ["v"]})
    with pytest.raises(ComplexError, match="squares to non-zero"):
        LefschetzComplex({"v": 0, "e": 1, "t": 2}, {"e": ["v"], "t": ["e"]})
    with pytest.raises(ComplexError, match="unknown cell"):
        LefschetzComplex({"e": 1}, {"e": ["x"]})


def test_lefschetz_homology_of_circle_with_two_cells():
    L = LefschetzComplex({0: 0, 1: 1}, {1: []})
    assert homology_dims(L) == [1, 1]
    assert L.incidence(1, 0) == 0


def test_cycle_basis_coordinates():
    B = CycleBasis(SQUARE, 1, set(SQUARE.cells()))
    assert B.dim == 1
    (z,) = B.reps
    assert B.coords(z) == 1
    with pytest.raises(ComplexError):
        B.coords(1)  # a single edge is not a cycle
    B0 = CycleBasis(SQUARE, 0, set(SQUARE.cells()))
    verts = SQUARE.cells(0)
    # two vertices are homologous: the class of their sum is zero
    assert B0.coords(1 << SQUARE.index(verts[0]) | 1 << SQUARE.index(verts[2])) == 0
