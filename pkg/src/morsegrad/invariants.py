"""Persistence modules over the grade grid and their Betti tables.

All grades here are compressed grid indices (see :class:`GradeGrid`); a grade
with a negative coordinate stands for the empty complex and so for the zero
vector space.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

from .complex import CycleBasis, ComplexError
from .f2 import BinaryMatrix
from .filtration import FilteredComplex, GradeGrid, MultiGrade, precedes, predecessors


class InvariantError(ValueError):
    pass


class PersistenceModule:
    """``H_q`` of every sublevel complex on the grid, with induced maps.

    ``F`` may be a :class:`Filtration` or a :class:`MorseComplex`; the grades
    are compressed through ``grid`` (by default the filtration's own grid).
    """

    def __init__(self, F: FilteredComplex, q: int, grid: GradeGrid | None = None, threads: int = 1):
        self.q = q
        self.grid = grid if grid is not None else GradeGrid.from_grades(F.grade.values(), F.n)
        self.complex = F.complex
        self._grade = {c: self.grid.compress(g) for c, g in F.grade.items()}
        self._maps: dict = {}
        self._top = tuple(k - 1 for k in self.grid.shape)
        grades = self.grid.grades()

        def one(u):
            return CycleBasis(self.complex, q, self.cells_at(u))

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                bases = list(ex.map(one, grades))
        else:
            bases = [one(u) for u in grades]
        self._bases = dict(zip(grades, bases))

    @property
    def n(self) -> int:
        return self.grid.n

    def cells_at(self, u: MultiGrade) -> set:
        return {c for c, g in self._grade.items() if precedes(g, u)}

    def on_grid(self, u: MultiGrade) -> bool:
        return tuple(u) in self._bases

    def _clip(self, u: MultiGrade) -> MultiGrade | None:
        """Grid point carrying the same space as ``u``; ``None`` for the zero space."""
        if min(u) < 0:
            return None
        return tuple(x if x < t else t for x, t in zip(u, self._top))

    def dim(self, u: MultiGrade) -> int:
        c = self._clip(u)
        return 0 if c is None else self._bases[c].dim

    def basis(self, u: MultiGrade) -> list[int]:
        c = self._clip(u)
        return [] if c is None else list(self._bases[c].reps)

    def map(self, u: MultiGrade, v: MultiGrade) -> BinaryMatrix:
        """Matrix of ``H_q(K^u) -> H_q(K^v)`` in the representative bases."""
        u, v = tuple(u), tuple(v)
        if not precedes(u, v):
            raise InvariantError(f"no map from {u} to {v}: grades not comparable")
        cu, cv = self._clip(u), self._clip(v)
        key = (cu, cv)
        m = self._maps.get(key)
        if m is None:
            du, dv = self.dim(u), self.dim(v)
            if cu is None or cv is None or du == 0 or dv == 0:
                m = BinaryMatrix.zeros(dv, du)
            else:
                target = self._bases[cv]
                m = BinaryMatrix(dv, du, [target.coords(z) for z in self._bases[cu].reps])
            self._maps[key] = m
        return m

    def edge_map(self, u: MultiGrade, i: int) -> BinaryMatrix:
        v = tuple(u[j] + (j == i) for j in range(len(u)))
        return self.map(u, v)

    def check_commutative(self) -> bool:
        """Both paths around every unit grid square give the same matrix."""
        for u in self.grid.grades():
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    ui = tuple(x + (k == i) for k, x in enumerate(u))
                    uj = tuple(x + (k == j) for k, x in enumerate(u))
                    uij = tuple(x + (k == j) for k, x in enumerate(ui))
                    if self.map(ui, uij) @ self.map(u, ui) != self.map(uj, uij) @ self.map(u, uj):
                        return False
        return True


def build_module(F: FilteredComplex, q: int, grid: GradeGrid | None = None, threads: int = 1) -> PersistenceModule:
    return PersistenceModule(F, q, grid, threads)


def rank_invariant(P: PersistenceModule, u: MultiGrade, v: MultiGrade) -> int:
    """Rank of ``H_q(K^u) -> H_q(K^v)``.

    The map is computed directly between the two grades; by commutativity it
    equals the composite along any monotone grid path (see :func:`path_rank`).
    """
    u, v = tuple(u), tuple(v)
    if not precedes(u, v):
        raise InvariantError(f"rank invariant needs u <= v, got {u} and {v}")
    return P.map(u, v).rank()


def path_rank(P: PersistenceModule, u: MultiGrade, v: MultiGrade, order=None) -> int:
    """Rank of the composite of unit-step maps from ``u`` to ``v``.

    ``order`` lists the axes in the order they are walked (default ``0..n-1``).
    """
    u, v = tuple(u), tuple(v)
    if not precedes(u, v):
        raise InvariantError(f"rank invariant needs u <= v, got {u} and {v}")
    cur = u
    acc = None
    for i in order if order is not None else range(len(u)):
        while cur[i] < v[i]:
            nxt = cur[:i] + (cur[i] + 1,) + cur[i + 1 :]
            step = P.map(cur, nxt)
            acc = step if acc is None else step @ acc
            cur = nxt
    if acc is None:
        return P.dim(u)
    return acc.rank()


@dataclass
class BettiTables:
    """``xi`` values keyed by ``(grade, q)``; each value has ``n + 1`` entries."""

    n: int
    values: dict = field(default_factory=dict)

    def get(self, i: int, q: int, u: MultiGrade) -> int:
        """``xi_i^q(u)``; zero for negative degrees or missing entries."""
        if q < 0 or i < 0 or i > self.n:
            return 0
        vals = self.values.get((tuple(u), q))
        return vals[i] if vals else 0

    def records(self) -> list[tuple[MultiGrade, int, tuple[int, ...]]]:
        return [(u, q, v) for (u, q), v in sorted(self.values.items()) if any(v)]


def _require_n(P: PersistenceModule, n: int) -> None:
    if P.n != n:
        raise InvariantError(f"expected a {n}-parameter module, got n={P.n}")


def betti_tables_n1(P: PersistenceModule, out: BettiTables | None = None) -> BettiTables:
    """Betti tables of a 1-parameter module from ``V_{u-1} -> V_u``."""
    _require_n(P, 1)
    out = out if out is not None else BettiTables(1)
    for u in P.grid.grades():
        (prev,) = predecessors(u)
        r = P.map(prev, u).rank()
        out.values[(u, P.q)] = (P.dim(u) - r, P.dim(prev) - r)
    return out


def koszul_maps(P: PersistenceModule, u: MultiGrade) -> tuple[BinaryMatrix, BinaryMatrix]:
    """The split and merge maps at ``u`` for a 2-parameter module.

    split: ``V_z -> V_x + V_y``, merge: ``V_x + V_y -> V_u`` with
    ``x = u - e1``, ``y = u - e2``, ``z = u - e1 - e2``.
    """
    _require_n(P, 2)
    u = tuple(u)
    x = (u[0] - 1, u[1])
    y = (u[0], u[1] - 1)
    z = (u[0] - 1, u[1] - 1)
    spl = P.map(z, x).vstack(P.map(z, y))
    mer = P.map(x, u).hstack(P.map(y, u))
    return spl, mer


def betti_tables_n2(modules: Mapping[int, PersistenceModule] | list, out: BettiTables | None = None) -> BettiTables:
    """Betti tables of 2-parameter modules through the Koszul complex at each grade."""
    mods = {P.q: P for P in modules} if isinstance(modules, list) else dict(modules)
    out = out if out is not None else BettiTables(2)
    for q, P in sorted(mods.items()):
        _require_n(P, 2)
        for u in P.grid.grades():
            spl, mer = koszul_maps(P, u)
            if not (mer @ spl).is_zero():
                raise InvariantError(f"Koszul complex at {u} is not a complex")
            r_spl, r_mer = spl.rank(), mer.rank()
            xi0 = P.dim(u) - r_mer
            xi1 = (mer.cols - r_mer) - r_spl
            xi2 = spl.cols - r_spl
            out.values[(u, q)] = (xi0, xi1, xi2)
    return out


def betti_tables(F: FilteredComplex, grid: GradeGrid | None = None, degrees=None, threads: int = 1) -> BettiTables:
    """Betti tables of ``H_q`` for every degree of ``F`` (n = 1 or 2)."""
    if F.n not in (1, 2):
        raise InvariantError(f"Betti tables are only available for n <= 2, got n={F.n}")
    degrees = range(F.complex.dimension + 1) if degrees is None else degrees
    mods = {q: PersistenceModule(F, q, grid, threads) for q in degrees}
    if F.n == 1:
        out = BettiTables(1)
        for P in mods.values():
            betti_tables_n1(P, out)
        return out
    return betti_tables_n2(mods)


@dataclass
class PersistencePairs:
    """1-parameter persistence pairs with their creating and destroying cells."""

    pairs: list = field(default_factory=list)  # (birth, death, q, positive, negative)
    essential: list = field(default_factory=list)  # (birth, q, positive)

    def intervals(self) -> list[tuple]:
        """Sorted ``(birth, death, q)`` with ``death = None`` for essential classes."""
        out = [(b, d, q) for b, d, q, _, _ in self.pairs]
        out += [(b, None, q) for b, q, _ in self.essential]
        return sorted(out, key=lambda r: (r[2], r[0], (1, ()) if r[1] is None else (0, r[1])))

    def cells(self) -> set:
        out = set()
        for _, _, _, p, n in self.pairs:
            out.update((p, n))
        out.update(p for _, _, p in self.essential)
        return out


def filtration_order(F: FilteredComplex) -> list:
    """Cells sorted by grade, then dimension, then the deterministic cell order."""
    K = F.complex
    return sorted(K.cells(), key=lambda c: (F.grade[c], K.dim_of(c), K.index(c)))


def persistence_pairs_n1(F: FilteredComplex) -> PersistencePairs:
    """Standard mod-2 column reduction along the filtration order.

    Pairs with equal birth and death grade are dropped.
    """
    if F.n != 1:
        raise InvariantError(f"persistence pairs need n = 1, got n={F.n}")
    K = F.complex
    order = filtration_order(F)
    pos = {c: i for i, c in enumerate(order)}
    pivots: dict[int, int] = {}  # row (highest index) -> column
    reduced: dict[int, int] = {}
    for j, c in enumerate(order):
        col = 0
        for f in K.facets(c):
            col ^= 1 << pos[f]
        while col:
            top = col.bit_length() - 1
            k = pivots.get(top)
            if k is None:
                break
            col ^= reduced[k]
        reduced[j] = col
        if col:
            pivots[col.bit_length() - 1] = j
    out = PersistencePairs()
    killed = {}
    for row, j in pivots.items():
        killed[row] = j
    for i, c in enumerate(order):
        if reduced[i]:
            continue  # negative cell
        q = K.dim_of(c)
        if i in killed:
            d = order[killed[i]]
            if F.grade[c] != F.grade[d]:
                out.pairs.append((F.grade[c], F.grade[d], q, c, d))
        else:
            out.essential.append((F.grade[c], q, c))
    return out


def inclusion_ranks(F: FilteredComplex, u: MultiGrade, q: int) -> tuple[int, int]:
    """Kernel and cokernel dimensions of ``H_q(union of K^{u-e_i}) -> H_q(K^u)``.

    ``u`` is given in the filtration's own coordinates.
    """
    u = tuple(u)
    K = F.complex
    if q < 0:
        return 0, 0
    src = CycleBasis(K, q, F.union_cells(u))
    dst = CycleBasis(K, q, F.sublevel_cells(u))
    try:
        m = BinaryMatrix(dst.dim, src.dim, [dst.coords(z) for z in src.reps])
    except ComplexError as e:  # pragma: no cover - union is a subcomplex of K^u
        raise InvariantError(str(e)) from e
    r = m.rank()
    return src.dim - r, dst.dim - r
