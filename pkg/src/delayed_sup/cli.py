"""Command-line interface: ``prove`` (default), ``bench`` and ``check-lifting``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .bench import CORPUS_DIR, format_csv, problem_files, run_bench
from .calculus import Calculus, Mode
from .clauses import Selection
from .ground import GroundingSpace, UninhabitedSort, check_lifting
from .saturation import ProverConfig, make_params, replay_proof, saturate, symbols_in_order
from .tptp import TptpError, format_clause, parse_file, validate

SUBCOMMANDS = ("prove", "bench", "check-lifting")
MODES = [m.value for m in Mode]
SELECTIONS = [s.value for s in Selection]
PRECEDENCES = ("arity", "occurrence", "reverse")


def _positive_float(s: str) -> float:
    v = float(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common(p: argparse.ArgumentParser):
    p.add_argument("--selection", choices=SELECTIONS, default="none",
                   help="literal selection function (default: none)")
    p.add_argument("--precedence", choices=PRECEDENCES, default="arity",
                   help="symbol precedence scheme for the ordering (default: arity)")
    p.add_argument("--kbo-weights", choices=("uniform",), default="uniform",
                   help="symbol weights for the ordering (only uniform)")
    p.add_argument("--include-dir", default=None, help="root directory for include directives")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delayed-sup",
        description="Superposition prover with delayed unification.",
    )
    sub = parser.add_subparsers(dest="command")

    prove = sub.add_parser("prove", help="run the prover on a CNF problem (default command)")
    prove.add_argument("problem", help="TPTP CNF file")
    prove.add_argument("--calculus", choices=MODES, default="delayed")
    prove.add_argument("--time-limit", type=_positive_float, default=None, metavar="S")
    prove.add_argument("--max-clauses", type=_positive_int, default=None, metavar="N")
    prove.add_argument("--max-iterations", type=_positive_int, default=None, metavar="N")
    prove.add_argument("--proof", action="store_true", help="print the refutation")
    prove.add_argument("--stats", action="store_true", help="print saturation statistics")
    _common(prove)

    bench = sub.add_parser("bench", help="run every problem of a directory under several modes")
    bench.add_argument("directory", nargs="?", default=None,
                       help="directory of .p files (default: the bundled corpus)")
    bench.add_argument("--modes", default=",".join(MODES),
                       help="comma-separated calculus modes (default: all four)")
    bench.add_argument("--time-limit", type=_positive_float, default=10.0, metavar="S")
    bench.add_argument("--max-clauses", type=_positive_int, default=None, metavar="N")
    bench.add_argument("--jobs", type=_positive_int, default=None, help="parallel runs (default: CPU count)")
    bench.add_argument("--output", default=None, help="CSV file (default: standard output)")
    bench.add_argument("--verify", action="store_true",
                       help="replay every refutation and report those that fail")
    _common(bench)

    lift = sub.add_parser("check-lifting", help="check that ground inferences lift to delayed inferences")
    lift.add_argument("problem")
    lift.add_argument("--depth", type=int, default=2, help="term depth of the grounding space (default: 2)")
    lift.add_argument("--max-violations", type=int, default=20, help="violations to print")
    _common(lift)
    return parser


def _normalize_argv(argv: Sequence[str]) -> List[str]:
    argv = list(argv)
    if argv and argv[0] not in SUBCOMMANDS and argv[0] not in ("-h", "--help"):
        argv.insert(0, "prove")
    return argv


def _load(path, include_dir):
    problem = parse_file(path, include_dir=include_dir)
    diags = [d for d in validate(problem) if d.message != "no clauses"]
    if diags:
        raise TptpError("; ".join(str(d) for d in diags))
    return problem


def _print_proof(result, problem, out):
    names = {}
    for c in result.proof:
        names[id(c)] = f"c{c.id}"
    print(f"% SZS output start Refutation for {problem}", file=out)
    for c in result.proof:
        rec = c.derivation
        body = format_clause(c)
        if rec.rule == "Input":
            src = rec.notes.get("name", "")
            role = rec.notes.get("role", "axiom")
            print(f"cnf({names[id(c)]}, {role}, {body}, file('{Path(problem).name}', {src})).", file=out)
            continue
        parents = ",".join(names.get(id(p), f"c{p.id}") for p in rec.premises)
        tag = "simplification" if rec.simplification else "inference"
        print(f"cnf({names[id(c)]}, plain, {body}, {tag}({rec.rule.lower()}, [status(thm)], [{parents}])).",
              file=out)
    print(f"% SZS output end Refutation for {problem}", file=out)


def cmd_prove(args, out) -> int:
    problem = _load(args.problem, args.include_dir)
    cfg = ProverConfig(
        mode=args.calculus, selection=args.selection, precedence=args.precedence,
        time_limit=args.time_limit, max_clauses=args.max_clauses, max_iterations=args.max_iterations,
    )
    result = saturate(problem.clauses, cfg)
    print(f"% SZS status {result.szs_status} for {Path(args.problem).name}", file=out)
    if args.proof and result.proof:
        problems = replay_proof(result.proof, result.calculus)
        if problems:
            for p in problems:
                print(f"% proof check failed: {p}", file=out)
        _print_proof(result, Path(args.problem).name, out)
    if args.stats:
        for k, v in result.stats.items():
            print(f"% {k}: {v}", file=out)
    return 0


def cmd_bench(args, out) -> int:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    bad = [m for m in modes if m not in MODES]
    if bad:
        raise TptpError(f"unknown mode(s): {', '.join(bad)}")
    directory = args.directory or CORPUS_DIR
    files = problem_files(directory)
    if not files:
        raise TptpError(f"no .p files in {directory}")
    records = run_bench(files, modes, args.time_limit, args.selection, args.max_clauses, args.jobs,
                        args.include_dir, args.verify)
    text = format_csv(records, modes)
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    bad = [r for r in records if r.proof_ok is False]
    for r in bad:
        print(f"error: proof of {r.problem} ({r.mode}) fails replay", file=sys.stderr)
    return 1 if bad else 0


def cmd_check_lifting(args, out) -> int:
    problem = _load(args.problem, args.include_dir)
    clauses = problem.clauses
    cfg = ProverConfig(selection=args.selection, precedence=args.precedence)
    calc = Calculus(make_params(clauses, cfg), args.selection)
    space = GroundingSpace(symbols_in_order(clauses), args.depth)
    report = check_lifting(clauses, space, calc)
    print(f"% {report.summary()}", file=out)
    for v in report.violations[: args.max_violations]:
        print(f"violation: {v}", file=out)
    return 0 if report.ok else 1


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    argv = _normalize_argv(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(out)
        return 2
    handler = {"prove": cmd_prove, "bench": cmd_bench, "check-lifting": cmd_check_lifting}[args.command]
    try:
        return handler(args, out)
    except (TptpError, UninhabitedSort) as e:
        print(f"error: {e}", file=sys.stderr)
        if args.command == "prove":
            print("% SZS status InputError", file=out)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
