"""Command-line interface: ``morsegrad <subcommand> <file> [options]``.

Exit codes: 0 when every requested check passes, 1 when a mathematical check
fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .analysis import AnalysisError, check_relative_perfect, verify_inequalities
from .complex import ComplexError, homology_dims
from .filtration import FiltrationError, grade_grid, precedes
from .generators import random_filtration
from .gradient import GradientError, check_consistency, compute_gradient, validate_gradient
from .invariants import InvariantError, PersistenceModule, betti_tables, persistence_pairs_n1, rank_invariant
from .io import (
    InputError,
    betti_section,
    emit_report,
    format_cells,
    gradient_section,
    inequalities_section,
    morse_section,
    pairs_section,
    perfectness_section,
    read_input,
)
from .morse import build_morse_complex, morse_numbers

OK, FAILED, BAD_INPUT = 0, 1, 2


class CheckFailed(Exception):
    pass


def _meta(args, parsed=None) -> dict:
    meta = {
        "tool": f"morsegrad {__version__}",
        "command": args.command,
        "options": {"tiebreak": args.tiebreak},
    }
    if args.command == "verify" and args.random:
        meta["options"].update(random=True, seed=args.seed, count=args.count)
    if parsed is not None:
        meta.update(
            input_sha256=parsed.sha256,
            n=parsed.n,
            mode=parsed.mode,
            f_vector=parsed.complex.f_vector(),
        )
        if parsed.perturbation:
            meta["perturbation"] = [
                {"vertex": v, "original": list(old), "perturbed": list(new)}
                for v, (old, new) in sorted(parsed.perturbation.items())
            ]
    return meta


def _need_max_extension(parsed) -> None:
    if not parsed.max_extension:
        raise InputError("this subcommand needs vertex values (max-extension mode), not explicit grades")


def _gradient(F, threads):
    V = compute_gradient(F, threads=threads)
    verdict = validate_gradient(F.complex, V)
    if not verdict:
        raise CheckFailed(f"invalid gradient: {verdict.reason} {verdict.witness}")
    verdict = check_consistency(F, V)
    if not verdict:
        raise CheckFailed(f"gradient inconsistent with the filtration: {verdict.witness}")
    return V


def _fmt(g) -> str:
    return "(" + ",".join(map(str, g)) + ")"


def cmd_validate(args, parsed, out, results):
    F = parsed.filtration
    out(f"ok: n={parsed.n} mode={parsed.mode} cells={len(F.complex)} f-vector={parsed.complex.f_vector()}")
    out(f"homology: {homology_dims(F.complex)}")
    for v, (old, new) in sorted(parsed.perturbation.items()):
        out(f"tiebreak: vertex {v} {_fmt(old)} -> {_fmt(new)}")
    return OK


def cmd_gradient(args, parsed, out, results):
    _need_max_extension(parsed)
    F = parsed.filtration
    V = _gradient(F, args.threads)
    results["gradient"] = gradient_section(F, V)
    out(f"pairs: {len(V.pairs)}  critical: {len(V.critical)}")
    K = F.complex
    for c in sorted(V.critical, key=lambda c: (K.dim_of(c), K.index(c))):
        out(f"critical {list(c)} dim {K.dim_of(c)} grade {_fmt(F.grade[c])}")
    return OK


def cmd_reduce(args, parsed, out, results):
    _need_max_extension(parsed)
    F = parsed.filtration
    V = _gradient(F, args.threads)
    M = build_morse_complex(F, V)
    results["gradient"] = gradient_section(F, V)
    results["morse_numbers"] = morse_section(morse_numbers(M, grade_grid(F)), grade_grid(F))
    for line in format_cells(M).splitlines():
        out(line)
    return OK


def cmd_morse_numbers(args, parsed, out, results):
    _need_max_extension(parsed)
    F = parsed.filtration
    V = _gradient(F, args.threads)
    M = build_morse_complex(F, V)
    grid = grade_grid(F)
    section = morse_section(morse_numbers(M, grid), grid)
    results["morse_numbers"] = section
    for r in section["records"]:
        out(f"m_{r['q']}{_fmt(r['grade'])} = {r['m']}")
    out("totals: " + " ".join(f"m_{t['q']}={t['m']}" for t in section["totals"]))
    return OK


def cmd_betti(args, parsed, out, results):
    F = parsed.filtration
    if F.n > 2:
        raise InputError(f"Betti tables are only available for n <= 2, got n={F.n}")
    grid = grade_grid(F)
    section = betti_section(betti_tables(F, grid, threads=args.threads), grid)
    results["betti_tables"] = section
    for r in section["records"]:
        out(f"xi^{r['q']}{_fmt(r['grade'])} = {tuple(r['xi'])}")
    return OK


def cmd_persistence(args, parsed, out, results):
    F = parsed.filtration
    if F.n != 1:
        raise InputError(f"persistence pairs need n = 1, got n={F.n}")
    section = pairs_section(persistence_pairs_n1(F))
    results["persistence_pairs"] = section
    for p in section["pairs"]:
        out(f"H{p['q']}: [{p['birth'][0]}, {p['death'][0]})  {p['positive']} -> {p['negative']}")
    for p in section["essential"]:
        out(f"H{p['q']}: [{p['birth'][0]}, inf)  {p['positive']}")
    return OK


def cmd_check_perfect(args, parsed, out, results):
    _need_max_extension(parsed)
    F = parsed.filtration
    V = _gradient(F, args.threads)
    grid = grade_grid(F)
    report = check_relative_perfect(F, V, threads=args.threads)
    results["gradient"] = gradient_section(F, V)
    results["perfectness"] = perfectness_section(report, grid)
    out(f"relative-perfect: {'yes' if report.verdict else 'no'}")
    for w in results["perfectness"]["witnesses"]:
        out(f"witness: u={_fmt(w['grade'])} q={w['q']} m={w['morse']} > relative dim {w['relative']}")
    return OK if report.verdict else FAILED


def _verify_one(F, threads, full: bool = True) -> tuple[list[str], dict]:
    """All checks on one max-extension filtration; returns failures and report sections."""
    failures = []
    V = _gradient(F, threads)
    M = build_morse_complex(F, V)
    grid = grade_grid(F)
    perf = check_relative_perfect(F, V, morse=M, threads=threads)
    ineq = verify_inequalities(F, V, perfectness=perf, morse=M, threads=threads)
    hk, hm = homology_dims(F.complex), homology_dims(M.complex)
    hm += [0] * (len(hk) - len(hm))
    if hk != hm:
        failures.append("Morse complex homology differs from the complex")
    if not ineq.ok:
        bad = [r for r in ineq.rows if not r.relative_holds or r.lower_holds is False or r.upper_holds is False]
        failures.append(f"inequality violated at {[(grid.expand(r.grade), r.q) for r in bad[:3]]}")
    if F.complex.dimension <= 2 and not perf.verdict:
        failures.append(f"2-complex gradient not relative-perfect at {perf.witnesses[:3]}")
    if full:
        for q in range(F.complex.dimension + 1):
            P = PersistenceModule(F, q, grid, threads)
            PM = PersistenceModule(M, q, grid, threads)
            G = grid.grades()
            for u in G:
                for v in G:
                    if precedes(u, v) and rank_invariant(P, u, v) != rank_invariant(PM, u, v):
                        failures.append(f"rank invariant differs at {grid.expand(u)} -> {grid.expand(v)}, q={q}")
                        break
    sections = {
        "gradient": gradient_section(F, V),
        "morse_numbers": morse_section(morse_numbers(M, grid), grid),
        "perfectness": perfectness_section(perf, grid),
        "inequalities": inequalities_section(ineq, grid),
    }
    if ineq.betti is not None:
        sections["betti_tables"] = betti_section(ineq.betti, grid)
    if F.n == 1:
        sections["persistence_pairs"] = pairs_section(persistence_pairs_n1(F))
    return failures, sections


def cmd_verify(args, parsed, out, results):
    if args.random:
        bad = 0
        for k in range(args.count):
            seed = args.seed + k
            F = random_filtration(seed, n=args.params, dim=args.dim, vertices=(4, args.max_vertices))
            failures, _ = _verify_one(F, args.threads)
            if failures:
                bad += 1
                out(f"seed {seed}: FAIL " + "; ".join(failures))
        out(f"{args.count - bad}/{args.count} random instances passed")
        return FAILED if bad else OK
    _need_max_extension(parsed)
    failures, sections = _verify_one(parsed.filtration, args.threads)
    results.update(sections)
    perf = sections["perfectness"]
    ineq = sections["inequalities"]
    out(f"relative-perfect: {'yes' if perf['verdict'] else 'no'}")
    out(f"inequalities: {'hold' if ineq['ok'] else 'VIOLATED'}")
    for r in ineq["rows"]:
        flags = []
        if r.get("lower_equal"):
            flags.append("lower bound sharp")
        if r.get("upper_equal"):
            flags.append("upper bound sharp")
        if flags:
            out(f"u={_fmt(r['grade'])} q={r['q']} m={r['morse']}: " + ", ".join(flags))
    for f in failures:
        out(f"FAIL {f}")
    return FAILED if failures else OK


COMMANDS = {
    "validate": cmd_validate,
    "gradient": cmd_gradient,
    "reduce": cmd_reduce,
    "morse-numbers": cmd_morse_numbers,
    "betti": cmd_betti,
    "persistence": cmd_persistence,
    "check-perfect": cmd_check_perfect,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="morsegrad",
        description="Discrete gradients and invariants of multi-parameter sublevel filtrations.",
    )
    p.add_argument("--version", action="version", version=f"morsegrad {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS), help="what to compute")
    p.add_argument("file", nargs="?", help="input file (see README for the format)")
    p.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    p.add_argument("--tiebreak", action="store_true", help="perturb colliding vertex values by vertex id")
    p.add_argument("--threads", type=int, default=1, help="worker threads for per-grade work")
    p.add_argument("--seed", type=int, default=0, help="first seed for verify --random")
    p.add_argument("--random", action="store_true", help="verify: run on random instances instead of a file")
    p.add_argument("--count", type=int, default=20, help="verify --random: number of instances")
    p.add_argument("--dim", type=int, default=2, help="verify --random: complex dimension")
    p.add_argument("--params", type=int, default=2, help="verify --random: parameter count n")
    p.add_argument("--max-vertices", type=int, default=10, help="verify --random: maximum vertex count")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    quiet = args.json == "-"

    def out(line: str) -> None:
        if not quiet:
            print(line)

    results: dict = {}
    parsed = None
    try:
        if not (args.command == "verify" and args.random):
            if args.file is None:
                parser.error(f"{args.command} needs an input file")
            parsed = read_input(args.file, tiebreak=args.tiebreak)
        status = COMMANDS[args.command](args, parsed, out, results)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return BAD_INPUT
    except (CheckFailed, GradientError, AnalysisError) as e:
        print(f"check failed: {e}", file=sys.stderr)
        return FAILED
    except (FiltrationError, ComplexError, InvariantError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return BAD_INPUT
    if args.json:
        text = emit_report(_meta(args, parsed), results)
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
