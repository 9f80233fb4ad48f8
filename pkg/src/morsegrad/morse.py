"""The filtered discrete Morse complex and multi-parameter Morse numbers."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .complex import LefschetzComplex
from .filtration import FilteredComplex, GradeGrid, precedes
from .gradient import DiscreteGradient, GradientError, check_consistency, validate_gradient


class ParityTable:
    """Mod-2 counts of V-paths from every cell to the critical cells.

    ``reach(c)`` is a bitset over the critical cells of ``dim c``: bit ``j`` is
    the parity of the number of V-paths from ``c`` to the ``j``-th of them
    (the trivial path counts when ``c`` itself is critical).  The path graph is
    acyclic, so parities propagate by memoised traversal even when path counts
    grow exponentially.
    """

    def __init__(self, K, V: DiscreteGradient):
        self.K = K
        self.V = V
        self.critical = V.critical_by_dim(K.dim_of)
        self._pos = {c: i for cs in self.critical.values() for i, c in enumerate(cs)}
        self._memo: dict = {}

    def reach(self, c) -> int:
        memo = self._memo
        if c in memo:
            return memo[c]
        K, V = self.K, self.V
        visiting = set()
        stack = [c]
        while stack:
            x = stack[-1]
            if x in memo:
                stack.pop()
                continue
            if x in V.critical:
                memo[x] = 1 << self._pos[x]
                stack.pop()
                continue
            t = V.up(x)
            if t is None:
                memo[x] = 0
                stack.pop()
                continue
            pending = [s for s in K.facets(t) if s != x and s not in memo]
            if pending:
                if visiting.intersection(pending):
                    raise GradientError("closed V-path while propagating parities")
                visiting.add(x)
                stack.extend(pending)
                continue
            acc = 0
            for s in K.facets(t):
                if s != x:
                    acc ^= memo[s]
            memo[x] = acc
            stack.pop()
        return memo[c]

    def boundary(self, t) -> int:
        """Bitset of critical facets ``s`` with ``kappa'(t, s) = 1``."""
        acc = 0
        for s in self.K.facets(t):
            acc ^= self.reach(s)
        return acc

    def parity(self, t, s) -> int:
        if self.K.dim_of(t) != self.K.dim_of(s) + 1:
            raise GradientError("separatrix parity needs dim t = dim s + 1")
        if s not in self.V.critical or t not in self.V.critical:
            raise GradientError("separatrix endpoints must be critical")
        return self.boundary(t) >> self._pos[s] & 1


def separatrix_parity(K, V: DiscreteGradient, t, s) -> int:
    """Parity of the number of separatrices from critical ``t`` down to critical ``s``."""
    return ParityTable(K, V).parity(t, s)


class MorseComplex(FilteredComplex):
    """Critical cells with the separatrix-parity incidence and inherited grades."""

    def __init__(self, complex: LefschetzComplex, grade, n: int, gradient: DiscreteGradient | None = None):
        self.complex = complex
        self.grade = dict(grade)
        self.n = n
        self.gradient = gradient

    def check_monotone(self) -> bool:
        return all(
            precedes(self.grade[s], self.grade[t]) for t in self.complex.cells() for s in self.complex.facets(t)
        )


def build_morse_complex(F, V: DiscreteGradient) -> MorseComplex:
    K = F.complex
    verdict = validate_gradient(K, V)
    if not verdict:
        raise GradientError(f"invalid gradient: {verdict.reason}")
    verdict = check_consistency(F, V)
    if not verdict:
        raise GradientError(f"gradient inconsistent with the filtration: {verdict.witness}")
    table = ParityTable(K, V)
    dims = {c: K.dim_of(c) for c in V.critical}
    incidence = {}
    for t in V.critical:
        q = dims[t]
        if q == 0:
            continue
        lower = table.critical.get(q - 1, [])
        b = table.boundary(t)
        incidence[t] = [lower[j] for j in range(len(lower)) if b >> j & 1]
    # construction validates kappa' o kappa' = 0
    M = LefschetzComplex(dims, incidence)
    MC = MorseComplex(M, {c: F.grade[c] for c in V.critical}, F.n, V)
    if not MC.check_monotone():
        raise GradientError("Morse incidence is not monotone in the grades")
    return MC


@dataclass
class MorseNumbersTable:
    """Counts of critical ``q``-cells entering exactly at each grade.

    Keys are ``(grade, q)`` with grades in the coordinates of the grid used.
    """

    counts: dict = field(default_factory=dict)
    totals: dict = field(default_factory=dict)

    def __getitem__(self, key) -> int:
        return self.counts.get(key, 0)

    def get(self, u, q) -> int:
        return self.counts.get((tuple(u), q), 0)


def morse_numbers(M: FilteredComplex, grid: GradeGrid | None = None) -> MorseNumbersTable:
    """``m_q(u)`` for every grade; with a grid, grades are compressed indices."""
    counts: Counter = Counter()
    totals: Counter = Counter()
    for c, g in M.grade.items():
        q = M.complex.dim_of(c)
        u = grid.compress(g) if grid is not None else g
        counts[(u, q)] += 1
        totals[q] += 1
    return MorseNumbersTable(dict(counts), dict(totals))
