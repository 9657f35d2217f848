"""Command-line front end: verify, search, eval, countermodel, render.

Exit codes: 0 success (verification passed / solutions found / output
rendered), 1 definite negative (verification failed / search exhausted
empty / formula valid), 2 usage or input error, 3 budget exceeded before
a definite answer.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .formula import Connective, parse, render_formula, variables_of
from .matrix import Matrix, parse_matrix, render_matrix
from .problems import (
    BUILTIN_MATRIX_NAMES,
    BUILTIN_PROBLEM_NAMES,
    IndependenceProblem,
    ProblemMatrixMismatch,
    builtin_matrix,
    builtin_problem,
    check_solution,
    parse_problem,
)
from .search import SearchConfig, SearchStatus, search

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class InputError(ValueError):
    """User input problem; reported on stderr with exit code 2."""


def format_assignment(assignment: dict[str, int]) -> str:
    return "[" + ",".join(f"{k}←{v}" for k, v in assignment.items()) + "]"


def _load_problem(args) -> IndependenceProblem:
    if args.builtin:
        try:
            return builtin_problem(args.builtin)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        text = Path(args.problem).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read problem file: {exc}") from None
    return parse_problem(text, name=args.problem)


def _load_matrix(path: str | None, builtin: str | None) -> Matrix:
    if builtin:
        try:
            return builtin_matrix(builtin)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read matrix file: {exc}") from None
    return parse_matrix(text)


def _parse_assignment(text: str) -> dict[str, int]:
    assignment: dict[str, int] = {}
    for part in text.split(","):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or not name:
            raise InputError(f"bad assignment entry {part!r}; expected name=value")
        try:
            assignment[name] = int(value)
        except ValueError:
            raise InputError(f"bad value in assignment entry {part!r}") from None
    return assignment


def _parse_formula_arg(text: str):
    try:
        return parse(text)
    except ValueError as exc:
        raise InputError(f"bad formula: {exc}") from None


# --- verify ------------------------------------------------------------------


def _cmd_verify(args) -> int:
    problem = _load_problem(args)
    m = _load_matrix(args.matrix, args.builtin_matrix)
    try:
        verdict = check_solution(problem, m)
    except ProblemMatrixMismatch as exc:
        raise InputError(str(exc)) from None
    sig = " ".join(c.label for c in Connective if c in m.signature)
    print(f"matrix: size {m.size}, designated {m.designated}, signature {sig}")
    print(f"normal: {'yes' if verdict.normality_ok else 'NO'}")
    failed = dict(verdict.failures)
    total = len(problem.kept)
    print(f"kept axioms: {total - len(failed)}/{total} valid")
    for name, _ in problem.kept:
        if name in failed:
            cm = failed[name]
            print(
                f"  {name}: countermodel {format_assignment(cm.assignment)}"
                f" -> value {cm.value}"
            )
        else:
            print(f"  {name}: valid")
    if verdict.witness is not None:
        print(
            f"target {problem.target_name}: falsified at "
            f"{format_assignment(verdict.witness.assignment)}"
            f" -> value {verdict.witness.value}"
        )
    else:
        print(f"target {problem.target_name}: NOT falsified (valid in this matrix)")
    print(f"result: {'PASS' if verdict.passed else 'FAIL'}")
    return EXIT_OK if verdict.passed else EXIT_NEGATIVE


# --- search ------------------------------------------------------------------


def _parse_fix(specs: list[str]) -> dict[str, object]:
    fixed: dict[str, object] = {}
    for spec in specs:
        label, sep, source = spec.partition("=")
        if not sep:
            raise InputError(f"bad --fix {spec!r}; expected CONN=SOURCE")
        label = label.strip()
        if label in fixed:
            raise InputError(f"duplicate --fix for {label!r}")
        if source.startswith("builtin:"):
            m = _load_matrix(None, source[len("builtin:"):])
        else:
            m = _load_matrix(source, None)
        table = {
            "imp": m.imp,
            "and": m.and_,
            "or": m.or_,
            "not": m.not_,
            "false": m.falsum,
        }.get(label)
        if label not in ("imp", "and", "or", "not", "false"):
            raise InputError(f"unknown connective {label!r} in --fix")
        if table is None:
            raise InputError(f"{source!r} has no {label} table to pin")
        fixed[label] = table
    return fixed


def _cmd_search(args) -> int:
    problem = _load_problem(args)
    if args.size is not None and args.sizes is not None:
        raise InputError("--size and --sizes are mutually exclusive")
    designated = "keep"
    if args.designated is not None:
        designated = None if args.designated == "all" else int(args.designated)
    if args.size is not None:
        problem = problem.with_sizes(args.size, args.size, designated)
    elif args.sizes is not None:
        lo, sep, hi = args.sizes.partition("..")
        try:
            lo, hi = int(lo), int(hi) if sep else int(lo)
        except ValueError:
            raise InputError(f"bad --sizes {args.sizes!r}; expected A..B") from None
        problem = problem.with_sizes(lo, hi, designated)
    elif designated != "keep":
        problem = problem.with_sizes(*problem.sizes, designated)

    if args.all and args.limit is not None:
        raise InputError("--all and --limit are mutually exclusive")
    limit = 0 if args.all else (args.limit if args.limit is not None else 1)

    config = SearchConfig(
        limit=limit,
        canonical_only=args.canonical_only,
        deterministic=args.deterministic,
        jobs=args.jobs,
        fixed_tables=_parse_fix(args.fix) if args.fix else None,
        budget=args.budget,
    )
    try:
        outcome = search(problem, config)
        emitted = 0
        for sol in outcome:
            if emitted:
                print()
            print(render_matrix(sol.matrix, "native"), end="")
            print(
                f"# falsified {problem.target_name} at "
                f"{format_assignment(sol.witness.assignment)}"
                f" -> value {sol.witness.value}"
            )
            emitted += 1
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.stats:
        payload = dict(outcome.stats)
        payload["status"] = outcome.status.value
        print(f"# stats {json.dumps(payload, sort_keys=True)}")
    if emitted > 0:
        return EXIT_OK
    if outcome.status is SearchStatus.BUDGET_EXCEEDED:
        return EXIT_BUDGET
    return EXIT_NEGATIVE


# --- eval / countermodel -------------------------------------------------------


def _cmd_eval(args) -> int:
    f = _parse_formula_arg(args.formula)
    m = _load_matrix(args.matrix, args.builtin_matrix)
    assignment = _parse_assignment(args.assign)
    missing = [name for name in variables_of(f) if name not in assignment]
    if missing:
        raise InputError(f"unbound variables: {', '.join(missing)}")
    try:
        v = m.evaluate(f, assignment)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    kind = "designated" if m.is_designated(v) else "non-designated"
    print(f"{v} ({kind})")
    return EXIT_OK


def _cmd_countermodel(args) -> int:
    f = _parse_formula_arg(args.formula)
    m = _load_matrix(args.matrix, args.builtin_matrix)
    try:
        cm = m.find_countermodel(f)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if cm is None:
        print(f"valid: {render_formula(f)} holds under all assignments")
        return EXIT_NEGATIVE
    print(f"countermodel {format_assignment(cm.assignment)} -> value {cm.value}")
    return EXIT_OK


# --- render ------------------------------------------------------------------


def _cmd_render(args) -> int:
    m = _load_matrix(args.matrix, args.builtin_matrix)
    try:
        print(render_matrix(m, args.format), end="")
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return EXIT_OK


# --- argument plumbing ---------------------------------------------------------


def _add_problem_source(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--problem", metavar="FILE", help="problem file")
    group.add_argument(
        "--builtin",
        metavar="NAME",
        help=f"built-in problem: {', '.join(BUILTIN_PROBLEM_NAMES)}",
    )


def _add_matrix_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    group = p.add_mutually_exclusive_group(required=required)
    group.add_argument("--matrix", metavar="FILE", help="matrix file")
    group.add_argument(
        "--builtin-matrix",
        metavar="NAME",
        help=f"built-in matrix: {', '.join(BUILTIN_MATRIX_NAMES)}",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aximat",
        description="Verify and search finite truth-table matrices that "
        "prove propositional axioms independent.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a matrix against a problem")
    _add_problem_source(p)
    _add_matrix_source(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="search for matrices solving a problem")
    _add_problem_source(p)
    p.add_argument("--size", type=int, metavar="N", help="override: single size")
    p.add_argument("--sizes", metavar="A..B", help="override: size range")
    p.add_argument(
        "--designated",
        metavar="D",
        help="override: designated count, or 'all' for every admissible count",
    )
    p.add_argument("--limit", type=int, metavar="M", help="stop after M solutions")
    p.add_argument("--all", action="store_true", help="emit every solution")
    p.add_argument(
        "--canonical-only",
        action="store_true",
        help="emit one representative per isomorphism orbit",
    )
    p.add_argument("--jobs", type=int, default=1, metavar="K", help="worker count")
    p.add_argument(
        "--deterministic",
        action="store_true",
        help="fixed emission order regardless of --jobs",
    )
    p.add_argument(
        "--budget", type=float, metavar="SECONDS", help="wall-clock time budget"
    )
    p.add_argument(
        "--fix",
        action="append",
        metavar="CONN=SOURCE",
        help="pin a connective table from a matrix file or builtin:NAME; repeatable",
    )
    p.add_argument("--stats", action="store_true", help="print a stats summary")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("eval", help="evaluate a formula under an assignment")
    p.add_argument("formula", help="formula text")
    _add_matrix_source(p)
    p.add_argument(
        "--assign", required=True, metavar="p=0,q=1", help="variable assignment"
    )
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser(
        "countermodel", help="print the first countermodel of a formula"
    )
    p.add_argument("formula", help="formula text")
    _add_matrix_source(p)
    p.set_defaults(func=_cmd_countermodel)

    p = sub.add_parser("render", help="print a matrix in a chosen format")
    _add_matrix_source(p)
    p.add_argument(
        "--format",
        default="native",
        metavar="FMT",
        help="native, markdown, or latex",
    )
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
