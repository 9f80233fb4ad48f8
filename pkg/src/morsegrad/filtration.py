"""Multi-grades, one-critical multi-filtrations and the grade grid."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .complex import SimplicialComplex, Simplex

MultiGrade = tuple[int, ...]


class FiltrationError(ValueError):
    pass


def precedes(u: MultiGrade, v: MultiGrade) -> bool:
    """The product order: ``u_i <= v_i`` for every coordinate."""
    return all(a <= b for a, b in zip(u, v))


def join(grades: Iterable[MultiGrade]) -> MultiGrade:
    """Component-wise maximum."""
    return tuple(map(max, zip(*grades)))


def predecessors(u: MultiGrade) -> list[MultiGrade]:
    """The grades ``u - e_i`` for each coordinate ``i``."""
    return [u[:i] + (u[i] - 1,) + u[i + 1 :] for i in range(len(u))]


class FilteredComplex:
    """A cell complex with a one-critical grade on every cell.

    Subclasses provide ``complex``, ``grade`` and ``n``.  All sublevel queries
    return plain cell sets so they work for simplicial and Morse complexes alike.
    """

    complex: object
    grade: Mapping
    n: int

    def sublevel_cells(self, u: MultiGrade) -> frozenset:
        return frozenset(c for c, g in self.grade.items() if precedes(g, u))

    def union_cells(self, u: MultiGrade) -> frozenset:
        """Cells of the union of the sublevels at ``u - e_i``."""
        out = set()
        for p in predecessors(u):
            out.update(self.sublevel_cells(p))
        return frozenset(out)

    def level_cells(self, u: MultiGrade) -> frozenset:
        u = tuple(u)
        return frozenset(c for c, g in self.grade.items() if g == u)

    @property
    def image(self) -> list[MultiGrade]:
        return sorted(set(self.grade.values()))


class Filtration(FilteredComplex):
    """A one-critical ``n``-filtration of a simplicial complex.

    ``vertex_values`` is set when the grades are the max-extension of a
    component-wise injective vertex function; gradient construction needs it.
    """

    def __init__(
        self,
        complex: SimplicialComplex,
        grade: Mapping[Simplex, MultiGrade],
        n: int,
        *,
        vertex_values: Mapping[int, MultiGrade] | None = None,
    ):
        self.complex = complex
        self.grade = {s: tuple(int(x) for x in grade[s]) for s in complex.cells()}
        self.n = n
        self.vertex_values = dict(vertex_values) if vertex_values is not None else None
        for s, g in self.grade.items():
            if len(g) != n:
                raise FiltrationError(f"grade of {list(s)} has {len(g)} coordinates, expected {n}")
        self._validate_monotone()

    def _validate_monotone(self) -> None:
        for t, g in self.grade.items():
            for s in self.complex.facets(t):
                if not precedes(self.grade[s], g):
                    raise FiltrationError(
                        f"grade not monotone: facet {list(s)} at {self.grade[s]} "
                        f"is not below {list(t)} at {g}"
                    )

    @classmethod
    def from_grades(cls, complex: SimplicialComplex, grades: Mapping[Simplex, MultiGrade]) -> Filtration:
        """Explicit per-simplex grades, validated for monotonicity."""
        missing = [s for s in complex.cells() if s not in grades]
        if missing:
            raise FiltrationError(f"no grade for simplex {list(missing[0])}")
        ns = {len(g) for g in grades.values()}
        if len(ns) != 1:
            raise FiltrationError("grades have differing lengths")
        return cls(complex, grades, ns.pop())

    @property
    def is_max_extension(self) -> bool:
        return self.vertex_values is not None

    def sublevel(self, u: MultiGrade) -> SimplicialComplex:
        return SimplicialComplex(self.sublevel_cells(u))

    def union_of_predecessors(self, u: MultiGrade) -> SimplicialComplex:
        return SimplicialComplex(self.union_cells(u))

    def level_set(self, u: MultiGrade) -> frozenset[Simplex]:
        return self.level_cells(u)

    def lower_star(self, s: Simplex) -> frozenset[Simplex]:
        """Cofaces of ``s`` (``s`` included) whose grade is below that of ``s``."""
        if s not in self.complex:
            raise FiltrationError(f"simplex {list(s)} is not in the complex")
        top = self.grade[s]
        out = {s}
        stack = [s]
        while stack:
            c = stack.pop()
            for t in self.complex.cofacets(c):
                if t not in out and precedes(self.grade[t], top):
                    out.add(t)
                    stack.append(t)
        return frozenset(out)

    def primary_simplex(self, u: MultiGrade) -> Simplex | None:
        """The simplex whose lower star is the level set at ``u``, if any."""
        if not self.is_max_extension:
            raise FiltrationError("primary simplices need a max-extension filtration")
        u = tuple(u)
        verts = set()
        for i, ui in enumerate(u):
            hits = [v for v, g in self.vertex_values.items() if g[i] == ui]
            if len(hits) != 1:
                return None
            verts.add(hits[0])
        s = tuple(sorted(verts))
        if s in self.complex and self.grade[s] == u:
            return s
        return None

    def compressed(self, grid: GradeGrid) -> Filtration:
        vv = None
        if self.vertex_values is not None:
            vv = {v: grid.compress(g) for v, g in self.vertex_values.items()}
        return Filtration(self.complex, {s: grid.compress(g) for s, g in self.grade.items()}, self.n, vertex_values=vv)


def make_injective(f0: Mapping[int, MultiGrade]) -> tuple[dict[int, MultiGrade], dict[int, tuple[MultiGrade, MultiGrade]]]:
    """Break coordinate ties by vertex id.

    Every coordinate is scaled by the vertex count and tied vertices receive
    increasing offsets in order of id, so strict order between distinct values
    is preserved.  Returns the new function and ``{vertex: (old, new)}`` for
    every vertex whose value changed.
    """
    verts = sorted(f0)
    n = len(next(iter(f0.values()))) if f0 else 0
    scale = max(len(verts), 1)
    new = {v: [0] * n for v in verts}
    for i in range(n):
        groups: dict[int, list[int]] = {}
        for v in verts:
            groups.setdefault(f0[v][i], []).append(v)
        for value, vs in groups.items():
            for k, v in enumerate(vs):
                new[v][i] = value * scale + k
    out = {v: tuple(g) for v, g in new.items()}
    return out, {v: (tuple(f0[v]), out[v]) for v in verts if tuple(f0[v]) != out[v]}


def check_injective(f0: Mapping[int, MultiGrade]) -> None:
    for i in range(len(next(iter(f0.values()))) if f0 else 0):
        seen: dict[int, int] = {}
        for v in sorted(f0):
            x = f0[v][i]
            if x in seen:
                raise FiltrationError(
                    f"vertex function is not injective in coordinate {i + 1}: "
                    f"vertices {seen[x]} and {v} both have value {x}"
                )
            seen[x] = v


def extend_max(K: SimplicialComplex, f0: Mapping[int, Iterable[int]], *, tiebreak: bool = False) -> Filtration:
    """Max-extension of a component-wise injective vertex function to ``K``.

    With ``tiebreak=True`` coordinate collisions are removed by
    :func:`make_injective` instead of raising.
    """
    values = {int(v): tuple(int(x) for x in g) for v, g in f0.items()}
    missing = [v for v in K.vertices if v not in values]
    if missing:
        raise FiltrationError(f"no value for vertex {missing[0]}")
    values = {v: values[v] for v in K.vertices}
    ns = {len(g) for g in values.values()}
    if len(ns) > 1:
        raise FiltrationError("vertex values have differing lengths")
    n = ns.pop() if ns else 0
    if tiebreak:
        try:
            check_injective(values)
        except FiltrationError:
            values, _ = make_injective(values)
    check_injective(values)
    grade = {s: join(values[v] for v in s) for s in K.cells()}
    return Filtration(K, grade, n, vertex_values=values)


@dataclass(frozen=True)
class GradeGrid:
    """Per-axis sorted coordinate values, compressed to ``0..k_i``."""

    axes: tuple[tuple[int, ...], ...]

    @classmethod
    def from_grades(cls, grades: Iterable[MultiGrade], n: int) -> GradeGrid:
        vals = [set() for _ in range(n)]
        for g in grades:
            for i, x in enumerate(g):
                vals[i].add(x)
        return cls(tuple(tuple(sorted(v)) for v in vals))

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    def compress(self, u: MultiGrade) -> MultiGrade:
        return tuple(a.index(x) for a, x in zip(self.axes, u))

    def expand(self, idx: MultiGrade) -> MultiGrade:
        return tuple(a[i] for a, i in zip(self.axes, idx))

    def dictionaries(self) -> list[dict[int, int]]:
        return [dict(enumerate(a)) for a in self.axes]

    def grades(self) -> list[MultiGrade]:
        """Every grid point in compressed coordinates, lexicographic order."""
        return list(itertools.product(*(range(len(a)) for a in self.axes)))

    def __contains__(self, idx: MultiGrade) -> bool:
        return len(idx) == self.n and all(0 <= i < len(a) for i, a in zip(idx, self.axes))


def grade_grid(F: FilteredComplex) -> GradeGrid:
    return GradeGrid.from_grades(F.grade.values(), F.n)
