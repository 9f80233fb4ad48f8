"""Text input formats and the JSON report."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .complex import ComplexError, LefschetzComplex, SimplicialComplex, facets, make_simplex
from .filtration import (
    FilteredComplex,
    Filtration,
    FiltrationError,
    GradeGrid,
    check_injective,
    join,
    make_injective,
    precedes,
)


class InputError(ValueError):
    pass


@dataclass
class ParsedInput:
    complex: SimplicialComplex
    filtration: Filtration
    n: int
    mode: str  # "vertex" (max-extension) or "explicit"
    perturbation: dict = field(default_factory=dict)  # vertex -> (old, new)
    sha256: str = ""

    @property
    def max_extension(self) -> bool:
        return self.mode == "vertex"


def _ints(tokens: list[str], lineno: int) -> list[int]:
    out = []
    for t in tokens:
        try:
            out.append(int(t))
        except ValueError:
            raise InputError(f"line {lineno}: expected an integer, got {t!r}") from None
    return out


def _grade(tokens: list[str], lineno: int) -> tuple[int, ...]:
    g = tuple(_ints(tokens, lineno))
    if any(x < 0 for x in g):
        raise InputError(f"line {lineno}: grades must be non-negative, got {list(g)}")
    return g


def _strip(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


def parse_input(text: str, *, tiebreak: bool = False) -> ParsedInput:
    """Parse the line-oriented complex/grade format.

    ``vertex`` lines give vertex values that are max-extended to every
    simplex; any ``grade`` line switches to explicit per-simplex grades.
    """
    n = None
    vertex_values: dict[int, tuple] = {}
    vertex_line: dict[int, int] = {}
    simplices: dict[tuple, int] = {}  # simplex -> first line mentioning it
    explicit: dict[tuple, tuple] = {}
    explicit_line: dict[tuple, int] = {}
    closure = False

    def need_params(lineno: int) -> int:
        if n is None:
            raise InputError(f"line {lineno}: 'params' must come before grades")
        return n

    def simplex(tokens: list[str], lineno: int) -> tuple:
        try:
            return make_simplex(_ints(tokens, lineno))
        except ComplexError as e:
            raise InputError(f"line {lineno}: {e}") from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _strip(raw)
        if not tokens:
            continue
        head, args = tokens[0], tokens[1:]
        if head == "params":
            if n is not None:
                raise InputError(f"line {lineno}: duplicate 'params'")
            if len(args) != 1:
                raise InputError(f"line {lineno}: 'params' takes one integer")
            (n,) = _ints(args, lineno)
            if n < 1:
                raise InputError(f"line {lineno}: parameter count must be at least 1")
        elif head == "vertex":
            k = need_params(lineno)
            if len(args) != 1 + k:
                raise InputError(f"line {lineno}: 'vertex' needs an id and {k} grade values")
            (v,) = simplex(args[:1], lineno)
            if v in vertex_values:
                raise InputError(f"line {lineno}: duplicate vertex {v} (first declared on line {vertex_line[v]})")
            vertex_values[v] = _grade(args[1:], lineno)
            vertex_line[v] = lineno
            simplices.setdefault((v,), lineno)
        elif head == "simplex":
            if not args:
                raise InputError(f"line {lineno}: 'simplex' needs at least one vertex")
            simplices.setdefault(simplex(args, lineno), lineno)
        elif head == "grade":
            k = need_params(lineno)
            if len(args) < 1 + k:
                raise InputError(f"line {lineno}: 'grade' needs vertices followed by {k} grade values")
            s = simplex(args[:-k], lineno)
            g = _grade(args[-k:], lineno)
            if s in explicit and explicit[s] != g:
                raise InputError(
                    f"line {lineno}: simplex {list(s)} already has grade {list(explicit[s])} "
                    f"(line {explicit_line[s]}); grades must be one-critical"
                )
            if s in explicit:
                raise InputError(f"line {lineno}: duplicate grade for simplex {list(s)} (line {explicit_line[s]})")
            explicit[s] = g
            explicit_line[s] = lineno
            simplices.setdefault(s, lineno)
        elif head == "closure":
            if args:
                raise InputError(f"line {lineno}: 'closure' takes no arguments")
            closure = True
        else:
            raise InputError(f"line {lineno}: unknown directive {head!r}")

    if n is None:
        raise InputError("missing 'params' line")
    if not simplices:
        raise InputError("no simplices given")

    if not closure:
        for s, lineno in simplices.items():
            for f in facets(s):
                if f not in simplices:
                    raise InputError(f"line {lineno}: missing face {list(f)} of simplex {list(s)} (add 'closure')")
    K = SimplicialComplex(simplices, closure=closure)
    sha = hashlib.sha256(text.encode("utf-8")).hexdigest()

    if explicit:
        grades = {}
        for v, g in vertex_values.items():
            if (v,) in explicit and explicit[(v,)] != g:
                raise InputError(
                    f"line {explicit_line[(v,)]}: vertex {v} already has grade {list(g)} "
                    f"(line {vertex_line[v]}); grades must be one-critical"
                )
            grades[(v,)] = g
            explicit_line.setdefault((v,), vertex_line[v])
        grades.update(explicit)
        for s in K.cells():
            if s not in grades:
                where = f"line {simplices[s]}" if s in simplices else "added by closure"
                raise InputError(f"simplex {list(s)} ({where}) has no grade")
        for t in K.cells():
            for f in facets(t):
                if not precedes(grades[f], grades[t]):
                    raise InputError(
                        f"line {explicit_line[t]}: grade {list(grades[t])} of {list(t)} is not above "
                        f"grade {list(grades[f])} of its face {list(f)} (line {explicit_line[f]}); "
                        "grades must be monotone"
                    )
        F = Filtration(K, grades, n)
        return ParsedInput(K, F, n, "explicit", sha256=sha)

    missing = [v for v in K.vertices if v not in vertex_values]
    if missing:
        s = next(s for s in K.cells() if missing[0] in s)
        where = f"line {simplices[s]}" if s in simplices else "closure"
        raise InputError(f"vertex {missing[0]} used by {list(s)} ({where}) has no value")
    perturbation = {}
    try:
        check_injective(vertex_values)
    except FiltrationError as e:
        if not tiebreak:
            raise InputError(_collision_message(vertex_values, vertex_line) or str(e)) from None
        vertex_values, perturbation = make_injective(vertex_values)
    F = Filtration(
        K,
        {s: join(vertex_values[v] for v in s) for s in K.cells()},
        n,
        vertex_values=vertex_values,
    )
    return ParsedInput(K, F, n, "vertex", perturbation, sha)


def _collision_message(values: dict, lines: dict) -> str | None:
    for i in range(len(next(iter(values.values())))):
        seen: dict = {}
        for v in sorted(values, key=lambda v: lines[v]):
            x = values[v][i]
            if x in seen:
                w = seen[x]
                return (
                    f"line {lines[v]}: vertex values are not injective in coordinate {i + 1}: "
                    f"vertices {w} (line {lines[w]}) and {v} both have value {x} "
                    "(use --tiebreak to perturb deterministically)"
                )
            seen[x] = v
    return None


def read_input(path: str, *, tiebreak: bool = False) -> ParsedInput:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_input(text, tiebreak=tiebreak)


# cell-complex text format


class GradedCells(FilteredComplex):
    """A graded Lefschetz complex read from the cell format."""

    def __init__(self, complex: LefschetzComplex, grade: dict, n: int):
        self.complex = complex
        self.grade = grade
        self.n = n


def _cell_label(c) -> str:
    return "[" + ",".join(map(str, c)) + "]" if isinstance(c, tuple) else str(c)


def format_cells(M: FilteredComplex) -> str:
    """Serialise a graded cell complex; ids follow the deterministic cell order."""
    K = M.complex
    ids = {c: i for i, c in enumerate(K.cells())}
    out = [f"params {M.n}"]
    for c, i in ids.items():
        g = " ".join(map(str, M.grade[c]))
        out.append(f"cell {i} {K.dim_of(c)} {g}  # {_cell_label(c)}")
    for c, i in ids.items():
        for f in K.facets(c):
            out.append(f"face {i} {ids[f]} 1")
    return "\n".join(out) + "\n"


def parse_cells(text: str) -> GradedCells:
    n = None
    dims: dict[int, int] = {}
    grades: dict[int, tuple] = {}
    lines: dict[int, int] = {}
    incidence: dict[int, set] = {}
    faces_seen = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _strip(raw)
        if not tokens:
            continue
        head, args = tokens[0], tokens[1:]
        if head == "params":
            if n is not None or len(args) != 1:
                raise InputError(f"line {lineno}: malformed or duplicate 'params'")
            (n,) = _ints(args, lineno)
        elif head == "cell":
            if n is None:
                raise InputError(f"line {lineno}: 'params' must come before cells")
            if len(args) != 2 + n:
                raise InputError(f"line {lineno}: 'cell' needs an id, a dimension and {n} grade values")
            cid, d = _ints(args[:2], lineno)
            if cid in dims:
                raise InputError(f"line {lineno}: duplicate cell {cid} (line {lines[cid]})")
            if d < 0:
                raise InputError(f"line {lineno}: negative dimension")
            dims[cid] = d
            grades[cid] = _grade(args[2:], lineno)
            lines[cid] = lineno
        elif head == "face":
            if len(args) != 3:
                raise InputError(f"line {lineno}: 'face' needs a cell, a facet and a coefficient")
            t, s, coef = _ints(args, lineno)
            if coef % 2 != 1:
                raise InputError(f"line {lineno}: coefficient must be 1 over the two-element field")
            faces_seen.append((t, s, lineno))
        else:
            raise InputError(f"line {lineno}: unknown directive {head!r}")
    if n is None:
        raise InputError("missing 'params' line")
    for t, s, lineno in faces_seen:
        for c in (t, s):
            if c not in dims:
                raise InputError(f"line {lineno}: unknown cell {c}")
        if s in incidence.setdefault(t, set()):
            raise InputError(f"line {lineno}: duplicate face ({t}, {s})")
        if not precedes(grades[s], grades[t]):
            raise InputError(f"line {lineno}: grade of cell {t} is not above that of its facet {s}")
        incidence[t].add(s)
    try:
        K = LefschetzComplex(dims, incidence)
    except ComplexError as e:
        raise InputError(str(e)) from None
    return GradedCells(K, grades, n)


# JSON report


def _cell(c):
    return list(c) if isinstance(c, tuple) else c


def _g(grid: GradeGrid | None, u):
    return list(grid.expand(u) if grid is not None else u)


def gradient_section(F: FilteredComplex, V) -> dict:
    K = F.complex
    crit = sorted(V.critical, key=lambda c: (K.dim_of(c), K.index(c)))
    return {
        "pairs": [{"cells": [_cell(s), _cell(t)], "grade": list(F.grade[s])} for s, t in V.pairs],
        "critical": [{"cell": _cell(c), "dim": K.dim_of(c), "grade": list(F.grade[c])} for c in crit],
        "counts": {"pairs": len(V.pairs), "critical": len(crit), "cells": len(K)},
    }


def morse_section(table, grid: GradeGrid) -> dict:
    records = [
        {"grade": _g(grid, u), "q": q, "m": m}
        for (u, q), m in sorted(table.counts.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        if m
    ]
    totals = [{"q": q, "m": m} for q, m in sorted(table.totals.items())]
    return {"records": records, "totals": totals}


def betti_section(xi, grid: GradeGrid) -> dict:
    return {
        "n": xi.n,
        "records": [{"grade": _g(grid, u), "q": q, "xi": list(v)} for u, q, v in xi.records()],
    }


def pairs_section(pp) -> dict:
    return {
        "pairs": [
            {"birth": list(b), "death": list(d), "q": q, "positive": _cell(p), "negative": _cell(m)}
            for b, d, q, p, m in sorted(pp.pairs, key=lambda r: (r[2], r[0], r[1]))
        ],
        "essential": [
            {"birth": list(b), "death": None, "q": q, "positive": _cell(p)}
            for b, q, p in sorted(pp.essential, key=lambda r: (r[1], r[0]))
        ],
    }


def perfectness_section(report, grid: GradeGrid) -> dict:
    rows = [r for r in report.rows if r.morse or r.relative]
    out = {
        "verdict": report.verdict,
        "rows": [
            {"grade": _g(grid, r.grade), "q": r.q, "morse": r.morse, "relative": r.relative, "equal": r.equal}
            for r in rows
        ],
        "witnesses": [
            {"grade": _g(grid, r.grade), "q": r.q, "morse": r.morse, "relative": r.relative}
            for r in report.rows
            if not r.equal
        ],
    }
    if report.cross_checks:
        out["cross_checks"] = dict(report.cross_checks)
    return out


def inequalities_section(report, grid: GradeGrid) -> dict:
    rows = []
    for r in report.rows:
        values = (r.morse, r.relative, r.lower or 0, r.upper or 0, r.upper_printed or 0)
        if not any(values):
            continue
        row = {
            "grade": _g(grid, r.grade),
            "q": r.q,
            "morse": r.morse,
            "relative": r.relative,
            "relative_holds": r.relative_holds,
        }
        if r.lower is not None:
            row.update(lower=r.lower, lower_holds=r.lower_holds, lower_equal=r.lower_equal)
        if r.upper is not None:
            row.update(
                upper=r.upper,
                upper_holds=r.upper_holds,
                upper_equal=r.upper_equal,
                upper_printed_degree=r.upper_printed,
            )
        rows.append(row)
    return {
        "relative_perfect": report.perfect,
        "ok": report.ok,
        "global": [{"q": q, "morse": m, "betti": b, "holds": m >= b} for q, m, b in report.global_rows],
        "rows": rows,
    }


SECTIONS = ("gradient", "morse_numbers", "betti_tables", "persistence_pairs", "perfectness", "inequalities")


def emit_report(meta: dict, results: dict | None = None) -> str:
    """One JSON document: ``meta`` plus whichever known sections are present."""
    doc = {"meta": meta}
    for key, value in (results or {}).items():
        if key not in SECTIONS:
            raise KeyError(f"unknown report section {key!r}")
        if value is not None:
            doc[key] = value
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
