"""Small named instances used by the tests, the acceptance suite and the CLI.

Letter-named vertices are mapped to integer ids in alphabetical order
(``a=0, b=1, c=2, d=3``).
"""

from __future__ import annotations

from .complex import SimplicialComplex
from .filtration import Filtration, extend_max

A, B, C, D = 0, 1, 2, 3

SQUARE_VALUES = {A: (0, 0), C: (1, 1), B: (3, 2), D: (2, 3)}

# Triangles of an 8-vertex dunce hat: every edge lies in at least two
# triangles, the complex is contractible and has f-vector (8, 24, 17).
DUNCE_HAT_TRIANGLES = [
    (1, 2, 4), (1, 2, 5), (1, 2, 8), (1, 3, 5), (1, 3, 6), (1, 3, 7),
    (1, 4, 8), (1, 6, 7), (2, 3, 6), (2, 3, 7), (2, 3, 8), (2, 4, 6),
    (2, 5, 7), (3, 5, 8), (4, 6, 8), (5, 7, 8), (6, 7, 8),
]  # fmt: skip


def four_cycle() -> Filtration:
    """Square a-b-c-d with the bi-grades used for the lower-bound sharpness example."""
    K = SimplicialComplex([(A, B), (B, C), (C, D), (A, D)], closure=True)
    return extend_max(K, SQUARE_VALUES)


def two_triangles() -> Filtration:
    """Triangles abd and bcd glued along bd, same vertex grades as :func:`four_cycle`."""
    K = SimplicialComplex([(A, B, D), (B, C, D)], closure=True)
    return extend_max(K, SQUARE_VALUES)


def dunce_hat() -> Filtration:
    K = SimplicialComplex(DUNCE_HAT_TRIANGLES, closure=True)
    return extend_max(K, {v: (v,) for v in K.vertices})


def cone_over_dunce_hat(apex: int = 9) -> Filtration:
    K = SimplicialComplex([t + (apex,) for t in DUNCE_HAT_TRIANGLES], closure=True)
    return extend_max(K, {v: (v,) for v in K.vertices})


def star_of_five() -> Filtration:
    """Closure of [2,3,5], [3,4,5] and [1,5] with ``f(v) = v``.

    The lower star of vertex 5 is the worked homotopy-expansion example.
    """
    K = SimplicialComplex([(2, 3, 5), (3, 4, 5), (1, 5)], closure=True)
    return extend_max(K, {v: (v,) for v in K.vertices})


def triangle_boundary() -> Filtration:
    """Hollow triangle abc with explicit bi-grades.

    In degree 0 two components are born at (0,1) and (1,0), die separately at
    (2,1) and (1,2), and the two deaths are related at (2,2).
    """
    K = SimplicialComplex([(A, B), (A, C), (B, C)], closure=True)
    grades = {
        (A,): (0, 1),
        (C,): (1, 0),
        (B,): (2, 0),
        (B, C): (2, 0),
        (A, B): (2, 1),
        (A, C): (1, 2),
    }
    return Filtration.from_grades(K, grades)


def single_edge() -> Filtration:
    """Vertices p=(0,1), r=(1,2) and the edge between them."""
    K = SimplicialComplex([(0, 1)], closure=True)
    return extend_max(K, {0: (0, 1), 1: (1, 2)})
