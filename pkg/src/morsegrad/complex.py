"""Simplicial and Lefschetz cell complexes with mod-2 homology.

Simplices are strictly increasing tuples of non-negative vertex ids.  Both
complex types expose the same small interface (``cells``, ``facets``,
``cofacets``, ``dim_of``, ``dimension``) so homology and everything downstream
works on either.  Cells of one dimension are ordered by their natural sort
order, which for simplices is lexicographic on the vertex tuple.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Iterable, Iterator, Mapping

from .f2 import BinaryMatrix, EchelonBasis, rank

Simplex = tuple[int, ...]
Cell = Hashable


class ComplexError(ValueError):
    pass


def make_simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(vertices))
    if not s:
        raise ComplexError("a simplex needs at least one vertex")
    for v in s:
        if not isinstance(v, int) or v < 0:
            raise ComplexError(f"vertex ids must be non-negative integers, got {v!r}")
    if len(set(s)) != len(s):
        raise ComplexError(f"repeated vertex in simplex {s}")
    return s


def facets(s: Simplex) -> list[Simplex]:
    """Codimension-one faces, in order of the deleted vertex position."""
    if len(s) <= 1:
        return []
    return [s[:i] + s[i + 1 :] for i in range(len(s))]


def faces(s: Simplex) -> Iterator[Simplex]:
    """All non-empty faces of ``s`` including ``s`` itself."""
    n = len(s)
    for mask in range(1, 1 << n):
        yield tuple(s[i] for i in range(n) if mask >> i & 1)


class _CellComplexBase:
    """Shared ordering, indexing and coface bookkeeping."""

    _by_dim: dict[int, tuple]
    _dim_of: dict

    def _finish(self) -> None:
        self._index = {c: i for cs in self._by_dim.values() for i, c in enumerate(cs)}
        self._cofacets: dict | None = None

    @property
    def dimension(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def cells(self, q: int | None = None) -> tuple:
        if q is None:
            return tuple(c for d in sorted(self._by_dim) for c in self._by_dim[d])
        return self._by_dim.get(q, ())

    def dim_of(self, c) -> int:
        return self._dim_of[c]

    def index(self, c) -> int:
        """Position of ``c`` among the cells of its dimension."""
        return self._index[c]

    def cofacets(self, c) -> tuple:
        if self._cofacets is None:
            co = defaultdict(list)
            for t in self.cells():
                for f in self.facets(t):
                    co[f].append(t)
            self._cofacets = {k: tuple(v) for k, v in co.items()}
        return self._cofacets.get(c, ())

    def __contains__(self, c) -> bool:
        return c in self._dim_of

    def __len__(self) -> int:
        return len(self._dim_of)

    def __iter__(self):
        return iter(self.cells())

    def f_vector(self) -> list[int]:
        return [len(self._by_dim.get(q, ())) for q in range(self.dimension + 1)]

    def is_face_closed(self, cells: Iterable) -> bool:
        cs = set(cells)
        return all(f in cs for c in cs for f in self.facets(c))


class SimplicialComplex(_CellComplexBase):
    """A finite abstract simplicial complex.

    With ``closure=True`` every face of every given simplex is added;
    otherwise the input must already be face-closed.
    """

    def __init__(self, simplices: Iterable[Iterable[int]] = (), *, closure: bool = False):
        given = {make_simplex(s) for s in simplices}
        if closure:
            full = set()
            for s in given:
                full.update(faces(s))
            given = full
        else:
            for s in given:
                for f in facets(s):
                    if f not in given:
                        raise ComplexError(f"missing face {list(f)} of simplex {list(s)}")
        by_dim = defaultdict(list)
        for s in given:
            by_dim[len(s) - 1].append(s)
        self._by_dim = {d: tuple(sorted(v)) for d, v in sorted(by_dim.items())}
        self._dim_of = {s: len(s) - 1 for s in given}
        self._finish()

    @property
    def simplices(self) -> frozenset[Simplex]:
        return frozenset(self._dim_of)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self._by_dim.get(0, ()))

    def facets(self, s: Simplex) -> list[Simplex]:
        return facets(s)

    def subcomplex(self, cells: Iterable[Simplex]) -> SimplicialComplex:
        cs = set(cells)
        extra = cs - self._dim_of.keys()
        if extra:
            raise ComplexError(f"{sorted(extra)[:3]} not in the complex")
        return SimplicialComplex(cs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SimplicialComplex):
            return self._dim_of.keys() == other._dim_of.keys()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._dim_of))

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector()})"


class LefschetzComplex(_CellComplexBase):
    """Abstract cell complex with a mod-2 incidence function.

    ``dims`` maps each cell id to its dimension; ``incidence`` maps a cell to
    the cells ``s`` with ``kappa(cell, s) = 1``.  Cell ids of one dimension must
    be mutually comparable so the ordering is deterministic.
    """

    def __init__(self, dims: Mapping, incidence: Mapping[object, Iterable] | None = None, *, validate: bool = True):
        self._dim_of = dict(dims)
        inc = {c: frozenset(fs) for c, fs in (incidence or {}).items()}
        by_dim = defaultdict(list)
        for c, d in self._dim_of.items():
            if not isinstance(d, int) or d < 0:
                raise ComplexError(f"cell {c!r} has invalid dimension {d!r}")
            by_dim[d].append(c)
        self._by_dim = {d: tuple(sorted(v)) for d, v in sorted(by_dim.items())}
        self._incidence = {c: tuple(sorted(inc.get(c, ()))) for c in self._dim_of}
        self._finish()
        if validate:
            self.validate()

    def facets(self, c) -> tuple:
        return self._incidence[c]

    def incidence(self, t, s) -> int:
        return 1 if s in self._incidence.get(t, ()) else 0

    def validate(self) -> None:
        for t, fs in self._incidence.items():
            for s in fs:
                if s not in self._dim_of:
                    raise ComplexError(f"incidence ({t!r}, {s!r}) references an unknown cell")
                if self._dim_of[s] != self._dim_of[t] - 1:
                    raise ComplexError(f"incidence ({t!r}, {s!r}) does not drop dimension by one")
        for q in range(1, self.dimension + 1):
            if not (boundary_matrix(self, q) @ boundary_matrix(self, q + 1)).is_zero():
                raise ComplexError(f"incidence squares to non-zero in degree {q}")

    def __repr__(self) -> str:
        return f"LefschetzComplex(f={self.f_vector()})"


def _columns(K, q: int, cols: Iterable, rows: Iterable) -> list[int]:
    row_index = {c: i for i, c in enumerate(rows)}
    out = []
    for c in cols:
        m = 0
        for f in K.facets(c):
            i = row_index.get(f)
            if i is not None:
                m ^= 1 << i
        out.append(m)
    return out


def boundary_matrix(K, q: int) -> BinaryMatrix:
    """Matrix of the boundary map from ``q``-cells to ``(q-1)``-cells."""
    cols = K.cells(q)
    rows = K.cells(q - 1) if q > 0 else ()
    return BinaryMatrix(len(rows), len(cols), _columns(K, q, cols, rows))


def _restricted_ranks(K, keep) -> tuple[dict[int, int], dict[int, int]]:
    """Chain dimensions and boundary ranks of the cells in ``keep``.

    Boundary entries into cells outside ``keep`` are dropped, so this is the
    relative chain complex when ``keep`` is a complement of a subcomplex.
    """
    by_q: dict[int, list] = defaultdict(list)
    for c in K.cells():
        if c in keep:
            by_q[K.dim_of(c)].append(c)
    dims = {q: len(cs) for q, cs in by_q.items()}
    ranks = {}
    for q, cs in by_q.items():
        if q == 0:
            ranks[q] = 0
            continue
        ranks[q] = rank(_columns(K, q, cs, by_q.get(q - 1, ())))
    return dims, ranks


def _betti_from(dims, ranks, top: int) -> list[int]:
    return [dims.get(q, 0) - ranks.get(q, 0) - ranks.get(q + 1, 0) for q in range(top + 1)]


def homology_dims(K, cells: Iterable | None = None) -> list[int]:
    """Mod-2 Betti numbers of ``K`` (or of the subcomplex spanned by ``cells``).

    The list has one entry per degree ``0..K.dimension``.
    """
    keep = set(K.cells()) if cells is None else set(cells)
    dims, ranks = _restricted_ranks(K, keep)
    return _betti_from(dims, ranks, K.dimension)


def relative_homology_dims(K, A: Iterable, within: Iterable | None = None) -> list[int]:
    """Dimensions of ``H_q(L, A)`` where ``L`` is ``K`` or the subcomplex ``within``.

    ``A`` must be a face-closed subset of ``L``.
    """
    L = set(K.cells()) if within is None else set(within)
    A = set(A.cells()) if hasattr(A, "cells") else set(A)
    if not A <= L:
        raise ComplexError("relative pair: A is not contained in the complex")
    for c in A:
        for f in K.facets(c):
            if f not in A:
                raise ComplexError(f"relative pair: A is not face-closed (missing {f!r} of {c!r})")
    dims, ranks = _restricted_ranks(K, L - A)
    return _betti_from(dims, ranks, K.dimension)


def euler_characteristic(K) -> int:
    return sum((-1) ** q * n for q, n in enumerate(K.f_vector()))


class CycleBasis:
    """A basis of ``H_q`` of a subcomplex, with coordinates for cycles.

    Chains are bitsets over ``K.cells(q)`` positions.  Representatives are
    chosen as residuals of cycle vectors against the boundary space, so a cycle
    of the subcomplex reduces to zero with a tag that gives its coordinates.
    """

    def __init__(self, K, q: int, cells: Iterable):
        keep = cells if isinstance(cells, (set, frozenset)) else set(cells)
        self.q = q
        qcells = [c for c in K.cells(q) if c in keep]
        col_index = {c: K.index(c) for c in qcells}
        self._basis = EchelonBasis()
        # boundaries of (q+1)-cells, in global q-cell coordinates
        for t in K.cells(q + 1):
            if t in keep:
                m = 0
                for f in K.facets(t):
                    m ^= 1 << col_index[f]
                self._basis.add(m)
        # cycles of q-cells
        cycles = []
        if q == 0:
            cycles = [1 << col_index[c] for c in qcells]
        else:
            lower = EchelonBasis()
            for c in qcells:
                m = 0
                for f in K.facets(c):
                    m ^= 1 << K.index(f)
                r, t = lower.add(m, 1 << col_index[c])
                if not r:
                    cycles.append(t)
        self.reps: list[int] = []
        for z in cycles:
            r, _ = self._basis.reduce(z)
            if r:
                self._basis.add(r, 1 << len(self.reps))
                self.reps.append(r)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, cycle: int) -> int:
        r, t = self._basis.reduce(cycle)
        if r:
            raise ComplexError("chain is not a cycle of this subcomplex")
        return t
