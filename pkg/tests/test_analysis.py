from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pipeline
from morsegrad import instances
from morsegrad.analysis import AnalysisError, check_relative_perfect, verify_inequalities
from morsegrad.filtration import grade_grid
from morsegrad.generators import random_filtration
from morsegrad.gradient import DiscreteGradient, GradientError, compute_gradient
from morsegrad.invariants import persistence_pairs_n1

seeds = st.integers(0, 10**6)


def test_square_is_relative_perfect(square):
    V = compute_gradient(square)
    report = check_relative_perfect(square, V)
    assert report.verdict
    row = next(r for r in report.rows if r.grade == (3, 3) and r.q == 1)
    assert row.morse == row.relative == 0


def test_trivial_gradient_on_single_edge_is_not_perfect():
    F = instances.single_edge()
    V = DiscreteGradient([], F.complex.cells())
    report = check_relative_perfect(F, V)
    assert not report.verdict
    grid = grade_grid(F)
    witnesses = {(grid.expand(u), q) for u, q in report.witnesses}
    assert ((1, 2), 1) in witnesses
    row = next(r for r in report.rows if grid.expand(r.grade) == (1, 2) and r.q == 1)
    assert (row.morse, row.relative) == (1, 0)


def test_dunce_hat_is_relative_perfect():
    F = instances.dunce_hat()
    report = check_relative_perfect(F, compute_gradient(F))
    assert report.verdict
    assert report.cross_checks == {"betti": True, "pairs": True}


def test_cone_over_dunce_hat_is_not_perfect():
    F = instances.cone_over_dunce_hat()
    report = check_relative_perfect(F, compute_gradient(F))
    assert not report.verdict
    assert report.witnesses
    assert report.cross_checks == {"betti": False, "pairs": False}


def test_inconsistent_gradient_is_rejected(square):
    V = DiscreteGradient([((0,), (0, 1))], [c for c in square.complex.cells() if c not in {(0,), (0, 1)}])
    with pytest.raises(GradientError):
        check_relative_perfect(square, V)


def test_lower_bound_sharp_on_square(square):
    report = verify_inequalities(square, compute_gradient(square))
    row = report.row((3, 3), 1)
    assert row.morse == 0
    assert row.lower == 0 and row.lower_equal
    assert report.ok


def test_upper_bound_sharp_on_two_triangles(two_tri):
    report = verify_inequalities(two_tri, compute_gradient(two_tri))
    assert report.perfect
    row = report.row((3, 3), 2)
    assert row.morse == 1
    assert row.upper == 1 and row.upper_equal
    # the same bound with xi_2 taken one degree lower would be violated
    assert row.upper_printed == 0


def test_global_inequalities_on_dunce_hat():
    F = instances.dunce_hat()
    report = verify_inequalities(F, compute_gradient(F))
    assert report.global_rows == [(0, 1, 1), (1, 1, 0), (2, 1, 0)]
    assert all(r.lower is None for r in report.rows)


def test_betti_bounds_need_two_parameters():
    F = random_filtration(2, n=3, vertices=(3, 5))
    V = compute_gradient(F)
    with pytest.raises(AnalysisError):
        verify_inequalities(F, V, with_betti=True)
    assert verify_inequalities(F, V).ok


def test_upper_bound_skipped_when_not_perfect():
    F = instances.single_edge()
    V = DiscreteGradient([], F.complex.cells())
    report = verify_inequalities(F, V)
    assert not report.perfect
    assert all(r.upper is None for r in report.rows)
    assert all(r.lower is not None for r in report.rows)


@given(seeds, st.integers(1, 2))
def test_two_complexes_are_relative_perfect(seed, n):
    F = random_filtration(seed, n=n, dim=2)
    V, M = pipeline(F)
    report = check_relative_perfect(F, V, morse=M)
    assert report.verdict
    ineq = verify_inequalities(F, V, perfectness=report, morse=M)
    assert ineq.ok


@given(seeds)
def test_one_parameter_equivalences(seed):
    F = random_filtration(seed, n=1, dim=3, vertices=(4, 9))
    V, M = pipeline(F)
    report = check_relative_perfect(F, V, morse=M)
    pp = persistence_pairs_n1(M)
    assert report.verdict == (set(V.critical) <= pp.cells())
    assert report.cross_checks["betti"] == report.verdict
