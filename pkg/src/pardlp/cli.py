"""Command-line driver.

Exit status: 0 success, 1 incoherent, 2 input error, 3 resource error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from .analysis import analyze
from .core import Interpretation, Program
from .engine import DEFAULT_ORACLE_BOUND, AnswerSetResult, OracleBoundError, oracle_answer_sets, solve
from .frontend import Diagnostic, ParseError, ProgramError, parse_program
from .grounder import MaxintError, ground_program, instantiate

EXIT_OK = 0
EXIT_INCOHERENT = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

MODES = ("solve", "ground", "check")


@dataclass
class RunConfig:
    inputs: List[str] = field(default_factory=list)
    mode: str = "solve"
    max_models: Optional[int] = None
    filter: Optional[List[str]] = None
    maxint: Optional[int] = None
    oracle: bool = False
    stats: bool = False
    threads: int = 1
    oracle_bound: int = DEFAULT_ORACLE_BOUND

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}")
        if self.max_models is not None and self.max_models < 1:
            raise ValueError("max_models must be at least 1")


def print_stats(result: Optional[AnswerSetResult]) -> str:
    """Solver statistics, one ``key: value`` per line in a fixed order."""
    if result is None:
        return ""
    s = result.stats
    return (
        f"ground_rules: {s.ground_rules}\n"
        f"choices: {s.choices}\n"
        f"candidates: {s.candidates}\n"
        f"minimality_checks: {s.minimality_checks}\n"
        f"answer_sets: {s.answer_sets}\n"
        f"time: {s.seconds:.3f}s\n"
    )


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_program(paths, maxint=None) -> Program:
    """Parse and concatenate input files; arities are shared across files."""
    arities = {}
    program = Program()
    errors = []
    for path in paths:
        try:
            part = parse_program(_read(path), arities)
        except ParseError as exc:
            errors.extend(Diagnostic(d.severity, d.code, f"{path}: {d.message}", d.span) for d in exc.diagnostics)
            continue
        program = part if not program.rules else program.merge(part)
    if errors:
        raise ParseError(errors)
    if maxint is not None:
        program = Program(program.rules, maxint)
    return program


def format_answer_set(answer_set, names=None) -> str:
    interp = Interpretation(answer_set)
    if names is not None:
        interp = interp.project(names)
    return str(interp)


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err

    def report(diags):
        for d in diags:
            print(d, file=err)

    try:
        program = load_program(cfg.inputs, cfg.maxint)
    except ProgramError as exc:
        report(exc.diagnostics)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error E-IO 0:0 {exc}", file=err)
        return EXIT_INPUT

    analysis = analyze(program)
    diags = analysis.diagnostics("warning" if cfg.oracle else "error")
    if cfg.filter:
        known = {name for name, _ in program.predicates()}
        for name in cfg.filter:
            if name not in known:
                diags.append(Diagnostic("warning", "W-FILTER", f"predicate {name} does not occur in the program"))
    report(diags)
    if not (analysis.sound if cfg.oracle else analysis.ok):
        return EXIT_INPUT
    if cfg.mode == "check":
        return EXIT_OK

    try:
        if cfg.mode == "ground":
            ground = instantiate(program) if cfg.oracle else ground_program(program)
            out.write(str(ground))
            return EXIT_OK
        if cfg.oracle:
            result = oracle_answer_sets(instantiate(program), bound=cfg.oracle_bound, limit=cfg.max_models)
        else:
            result = solve(ground_program(program), limit=cfg.max_models, threads=cfg.threads)
    except (OracleBoundError, MaxintError) as exc:
        report(exc.diagnostics)
        return EXIT_RESOURCE
    except ProgramError as exc:
        report(exc.diagnostics)
        return EXIT_INPUT

    for answer_set in result.answer_sets:
        print(format_answer_set(answer_set, cfg.filter), file=out)
    if not result.coherent:
        print("INCOHERENT", file=out)
    if cfg.stats:
        err.write(print_stats(result))
    return EXIT_OK if result.coherent else EXIT_INCOHERENT


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must not be negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pardlp", description="Disjunctive logic programs with parametric connectives.")
    ap.add_argument("inputs", nargs="+", metavar="FILE", help="program files, concatenated ('-' reads stdin)")
    ap.add_argument("--mode", choices=MODES, default="solve")
    ap.add_argument("-n", "--max-models", type=_positive, default=None, metavar="N", help="stop after N answer sets")
    ap.add_argument("--filter", default=None, metavar="P,Q", help="print only atoms of these predicates")
    ap.add_argument("--maxint", type=_nonnegative, default=None, metavar="N")
    ap.add_argument("--oracle", action="store_true", help="use the direct-semantics enumerator")
    ap.add_argument("--oracle-bound", type=_positive, default=DEFAULT_ORACLE_BOUND, metavar="N")
    ap.add_argument("--stats", action="store_true", help="print solver statistics to stderr")
    ap.add_argument("--threads", type=_positive, default=1, metavar="N")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    names = [n.strip() for n in args.filter.split(",") if n.strip()] if args.filter is not None else None
    cfg = RunConfig(
        inputs=args.inputs,
        mode=args.mode,
        max_models=args.max_models,
        filter=names,
        maxint=args.maxint,
        oracle=args.oracle,
        stats=args.stats,
        threads=args.threads,
        oracle_bound=args.oracle_bound,
    )
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
