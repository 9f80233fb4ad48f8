"""Discrete gradient vector fields built by homotopy expansion of lower stars."""

from __future__ import annotations

import graphlib
import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .complex import Simplex, facets
from .filtration import Filtration, FiltrationError


class GradientError(ValueError):
    pass


class DiscreteGradient:
    """A set of discrete vectors ``(sigma, tau)`` plus the critical cells."""

    def __init__(self, pairs: Iterable[tuple[Hashable, Hashable]], critical: Iterable[Hashable]):
        self.pairs = tuple(sorted(pairs, key=_cell_key_pair))
        self.critical = frozenset(critical)
        self._up: dict = {}
        self._down: dict = {}
        for s, t in self.pairs:
            if s in self._up or s in self._down or t in self._up or t in self._down:
                raise GradientError(f"cell appears in two discrete vectors: {(s, t)!r}")
            self._up[s] = t
            self._down[t] = s

    def up(self, c):
        """The cofacet ``c`` is paired with, or ``None``."""
        return self._up.get(c)

    def down(self, c):
        """The facet ``c`` is paired with, or ``None``."""
        return self._down.get(c)

    def is_critical(self, c) -> bool:
        return c in self.critical

    def cells(self) -> set:
        return set(self._up) | set(self._down) | set(self.critical)

    def critical_by_dim(self, dim_of) -> dict[int, list]:
        out: dict[int, list] = {}
        for c in sorted(self.critical, key=_cell_key):
            out.setdefault(dim_of(c), []).append(c)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteGradient):
            return NotImplemented
        return self.pairs == other.pairs and self.critical == other.critical

    def __repr__(self) -> str:
        return f"DiscreteGradient(pairs={len(self.pairs)}, critical={len(self.critical)})"


def _cell_key(c):
    return (len(c), c) if isinstance(c, tuple) else (0, c)


def _cell_key_pair(p):
    return _cell_key(p[0]), _cell_key(p[1])


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    witness: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def expansion_index(F: Filtration, cells: Iterable[Simplex]) -> dict[Simplex, int]:
    """A facet-compatible total order on ``cells``.

    Cells are sorted by dimension, then by their vertex values listed from the
    largest down (product grades compared lexicographically), then by vertex
    ids.  Dimension first makes the order compatible with the facet relation.
    """
    vv = F.vertex_values
    if vv is None:
        raise FiltrationError("expansion index needs a max-extension filtration")

    def key(s):
        return (len(s), tuple(sorted((vv[v] for v in s), reverse=True)), s)

    return {s: i for i, s in enumerate(sorted(cells, key=key))}


def homotopy_expansion(lower_star: Iterable[Simplex], index: Mapping[Simplex, int]) -> tuple[list, list]:
    """Pair the cells of one lower star by simple homotopy expansions.

    ``index`` must be a total order on the lower star compatible with the
    facet relation.  Returns ``(pairs, critical)``; together they partition
    the lower star.  The two work-lists are min-heaps keyed by ``index`` and
    stale entries (cells classified after being queued) are skipped.
    """
    L = set(lower_star)
    if not L:
        raise GradientError("empty lower star")
    missing = [c for c in L if c not in index]
    if missing:
        raise GradientError(f"index does not cover {list(missing[0])}")
    I = {c: index[c] for c in L}
    if len(set(I.values())) != len(I):
        raise GradientError("index is not injective on the lower star")
    sigma = min(L, key=I.__getitem__)
    base = set(sigma)
    for t in L:
        if not base <= set(t):
            raise GradientError(f"{list(t)} is not a coface of {list(sigma)}: not a single lower star")

    in_facets = {t: [f for f in facets(t) if f in L] for t in L}
    co: dict = {t: [] for t in L}
    for t, fs in in_facets.items():
        for f in fs:
            if I[f] >= I[t]:
                raise GradientError(f"index not compatible with the facet relation at {list(f)} < {list(t)}")
            co[f].append(t)

    if len(L) == 1:
        return [], [sigma]

    classified: set = set()
    pairs: list = []
    critical: list = []

    def unclassified(a):
        return [f for f in in_facets[a] if f not in classified]

    delta = min(co[sigma], key=I.__getitem__)
    pairs.append((sigma, delta))
    classified.update((sigma, delta))

    ord0 = [(I[a], a) for a in L if a not in classified and not unclassified(a)]
    ord1 = [(I[a], a) for a in L if a not in classified and len(unclassified(a)) == 1 and I[a] > I[delta]]
    heapq.heapify(ord0)
    heapq.heapify(ord1)

    while ord1 or ord0:
        while ord1:
            _, a = heapq.heappop(ord1)
            if a in classified:
                continue
            uf = unclassified(a)
            if not uf:
                heapq.heappush(ord0, (I[a], a))
                continue
            (lam,) = uf
            pairs.append((lam, a))
            classified.update((lam, a))
            for b in co[a] + co[lam]:
                if b not in classified and len(unclassified(b)) == 1 and (I[b] > I[a] or I[b] > I[lam]):
                    heapq.heappush(ord1, (I[b], b))
        while ord0:
            _, g = heapq.heappop(ord0)
            if g in classified:
                continue
            critical.append(g)
            classified.add(g)
            for t in co[g]:
                if t not in classified and len(unclassified(t)) == 1 and I[t] > I[g]:
                    heapq.heappush(ord1, (I[t], t))
            break

    if classified != L:
        raise GradientError("homotopy expansion left cells unclassified")
    return pairs, critical


def compute_gradient(F: Filtration, threads: int = 1) -> DiscreteGradient:
    """Run homotopy expansion on the lower star of every primary simplex."""
    if not F.is_max_extension:
        raise FiltrationError("gradient construction needs a max-extension filtration")

    def one(u):
        s = F.primary_simplex(u)
        if s is None:
            raise FiltrationError(f"no primary simplex at grade {u}")
        L = F.lower_star(s)
        if L != F.level_set(u):
            raise FiltrationError(f"lower star of {list(s)} differs from the level set at {u}")
        return homotopy_expansion(L, expansion_index(F, L))

    grades = F.image
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(one, grades))
    else:
        parts = [one(u) for u in grades]
    pairs = [p for ps, _ in parts for p in ps]
    critical = [c for _, cs in parts for c in cs]
    return DiscreteGradient(pairs, critical)


def validate_gradient(K, V: DiscreteGradient) -> Verdict:
    """Check the partition property and acyclicity of ``V`` on ``K``.

    A closed V-path is a cycle in the Hasse diagram with matched edges
    reversed; the witness is the cycle's cell sequence.
    """
    cells = set(K.cells())
    seen: dict = {}
    for s, t in V.pairs:
        if s not in cells or t not in cells:
            return Verdict(False, "pair references a cell outside the complex", [s, t])
        if s not in K.facets(t):
            return Verdict(False, "pair is not a facet/cofacet pair", [s, t])
        for c in (s, t):
            if c in seen:
                return Verdict(False, "cell in two discrete vectors", [c])
            seen[c] = True
    for c in V.critical:
        if c not in cells:
            return Verdict(False, "critical cell outside the complex", [c])
        if c in seen:
            return Verdict(False, "cell both critical and paired", [c])
    unassigned = cells - set(seen) - V.critical
    if unassigned:
        return Verdict(False, "cells neither paired nor critical", sorted(unassigned, key=_cell_key)[:5])

    graph: dict = {c: set() for c in cells}
    for t in cells:
        for s in K.facets(t):
            if V.up(s) == t:
                graph[t].add(s)  # s -> t
            else:
                graph[s].add(t)  # t -> s
    try:
        tuple(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError as e:
        return Verdict(False, "closed V-path", list(e.args[1]))
    return Verdict(True)


def check_consistency(F, V: DiscreteGradient) -> Verdict:
    """Every discrete vector joins two cells of the same grade."""
    for s, t in V.pairs:
        if F.grade[s] != F.grade[t]:
            return Verdict(False, "discrete vector crosses grades", [s, t, F.grade[s], F.grade[t]])
    return Verdict(True)


def trace_vpaths(K, V: DiscreteGradient, start, restrict: Iterable | None = None) -> list[tuple]:
    """All maximal V-paths leaving ``start``, optionally within ``restrict``.

    A path is returned as ``(s0, t0, s1, ..., sr)``; a start with no matched
    cofacet gives the single trivial path ``(start,)``.
    """
    allowed = None if restrict is None else set(restrict)
    out = []
    stack = [(start,)]
    while stack:
        path = stack.pop()
        last = path[-1]
        t = V.up(last)
        nxt = []
        if t is not None and (allowed is None or t in allowed):
            for s in K.facets(t):
                if s != last and (allowed is None or s in allowed):
                    nxt.append(path + (t, s))
        if nxt:
            stack.extend(nxt)
        else:
            out.append(path)
    return sorted(out)
