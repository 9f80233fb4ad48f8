"""Relative-perfectness and the Morse-type inequalities over the grade grid."""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex import homology_dims, relative_homology_dims
from .filtration import FilteredComplex, GradeGrid, MultiGrade, grade_grid
from .gradient import DiscreteGradient, GradientError, check_consistency
from .invariants import BettiTables, betti_tables, persistence_pairs_n1
from .morse import MorseComplex, MorseNumbersTable, build_morse_complex, morse_numbers


class AnalysisError(ValueError):
    pass


@dataclass
class PerfectRow:
    grade: MultiGrade
    q: int
    morse: int
    relative: int

    @property
    def equal(self) -> bool:
        return self.morse == self.relative


@dataclass
class PerfectnessReport:
    """Morse numbers against relative homology at every grid grade (compressed)."""

    rows: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)  # (grade, q) with m > relative
    cross_checks: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.verdict


def relative_dims_on_grid(F: FilteredComplex, grid: GradeGrid) -> dict:
    """``dim H_q(K^u, union of K^{u-e_i})`` keyed by ``(compressed u, q)``."""
    K = F.complex
    Fc = _Compressed(F, grid)
    out = {}
    for u in grid.grades():
        rel = relative_homology_dims(K, Fc.union_cells(u), within=Fc.sublevel_cells(u))
        for q, r in enumerate(rel):
            out[(u, q)] = r
    return out


class _Compressed(FilteredComplex):
    """View of ``F`` with grades in grid indices."""

    def __init__(self, F: FilteredComplex, grid: GradeGrid):
        self.complex = F.complex
        self.n = F.n
        self.grade = {c: grid.compress(g) for c, g in F.grade.items()}


def check_relative_perfect(
    F: FilteredComplex,
    V: DiscreteGradient,
    *,
    morse: MorseComplex | None = None,
    threads: int = 1,
) -> PerfectnessReport:
    """Compare ``m_q(u)`` with ``dim H_q(K^u, union of K^{u-e_i})`` everywhere on the grid.

    For ``n = 1`` two equivalent conditions are evaluated as well and stored in
    ``cross_checks``; a disagreement with the main verdict raises.
    """
    verdict = check_consistency(F, V)
    if not verdict:
        raise GradientError(f"gradient inconsistent with the filtration: {verdict.witness}")
    M = morse if morse is not None else build_morse_complex(F, V)
    grid = grade_grid(F)
    m = morse_numbers(M, grid)
    rel = relative_dims_on_grid(F, grid)
    report = PerfectnessReport()
    for (u, q), r in sorted(rel.items()):
        row = PerfectRow(u, q, m.get(u, q), r)
        if row.morse < row.relative:
            raise AnalysisError(f"Morse number below relative homology at {u}, q={q}: {row.morse} < {r}")
        report.rows.append(row)
        if not row.equal:
            report.witnesses.append((u, q))
    if F.n == 1:
        xi = betti_tables(F, grid, threads=threads)
        by_betti = all(
            row.morse == xi.get(0, row.q, row.grade) + xi.get(1, row.q - 1, row.grade) for row in report.rows
        )
        # on the Morse complex a critical cell is positive or negative when it
        # takes part in a pair of positive length or creates an essential class
        pp = persistence_pairs_n1(M)
        by_pairs = set(V.critical) <= pp.cells()
        report.cross_checks = {"betti": by_betti, "pairs": by_pairs}
        if by_betti != report.verdict or by_pairs != report.verdict:
            raise AnalysisError(f"n=1 equivalent conditions disagree: {report.cross_checks}, verdict {report.verdict}")
    return report


@dataclass
class InequalityRow:
    grade: MultiGrade
    q: int
    morse: int
    relative: int
    lower: int | None = None
    upper: int | None = None
    upper_printed: int | None = None  # same bound with xi_2 in degree q-1

    @property
    def relative_holds(self) -> bool:
        return self.morse >= self.relative

    @property
    def lower_holds(self) -> bool | None:
        return None if self.lower is None else self.morse >= self.lower

    @property
    def upper_holds(self) -> bool | None:
        return None if self.upper is None else self.morse <= self.upper

    @property
    def lower_equal(self) -> bool | None:
        return None if self.lower is None else self.morse == self.lower

    @property
    def upper_equal(self) -> bool | None:
        return None if self.upper is None else self.morse == self.upper


@dataclass
class InequalityReport:
    rows: list = field(default_factory=list)
    global_rows: list = field(default_factory=list)  # (q, m_q(V), beta_q(K))
    perfect: bool = False
    betti: BettiTables | None = None

    def row(self, u: MultiGrade, q: int) -> InequalityRow | None:
        for r in self.rows:
            if r.grade == tuple(u) and r.q == q:
                return r
        return None

    @property
    def ok(self) -> bool:
        if not all(m >= b for _, m, b in self.global_rows):
            return False
        for r in self.rows:
            if not r.relative_holds or r.lower_holds is False or r.upper_holds is False:
                return False
        return True


def verify_inequalities(
    F: FilteredComplex,
    V: DiscreteGradient,
    *,
    perfectness: PerfectnessReport | None = None,
    morse: MorseComplex | None = None,
    betti: BettiTables | None = None,
    with_betti: bool | None = None,
    threads: int = 1,
) -> InequalityReport:
    """Relative and global Morse inequalities; for ``n = 2`` also the Betti-table bounds.

    Grades in the rows are compressed grid indices.  The upper bound is only
    evaluated when the gradient is relative-perfect.
    """
    with_betti = F.n == 2 if with_betti is None else with_betti
    if with_betti and F.n != 2:
        raise AnalysisError(f"Betti-table bounds need n = 2, got n={F.n}")
    M = morse if morse is not None else build_morse_complex(F, V)
    if perfectness is None:
        perfectness = check_relative_perfect(F, V, morse=M, threads=threads)
    grid = grade_grid(F)
    m: MorseNumbersTable = morse_numbers(M, grid)
    report = InequalityReport(perfect=perfectness.verdict)
    for q, b in enumerate(homology_dims(F.complex)):
        report.global_rows.append((q, m.totals.get(q, 0), b))
    if with_betti:
        report.betti = betti if betti is not None else betti_tables(F, grid, threads=threads)
    xi = report.betti
    for p in perfectness.rows:
        u, q = p.grade, p.q
        row = InequalityRow(u, q, p.morse, p.relative)
        if xi is not None:
            base = xi.get(0, q, u) + xi.get(1, q - 1, u)
            row.lower = base - xi.get(2, q - 1, u)
            if report.perfect:
                row.upper = base + xi.get(2, q - 2, u)
                row.upper_printed = base + xi.get(2, q - 1, u)
        report.rows.append(row)
    return report
