"""Independence problems: definitions, file format, built-ins, checker.

An independence problem asks for a finite matrix that validates a kept set
of axioms under modus ponens (a normal implication table) while falsifying
one target axiom.  Such a matrix proves the target underivable from the
kept axioms.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

from .formula import Connective, Formula, connectives_of, parse
from .matrix import Countermodel, Matrix

#: ``int`` applies to every size; a tuple gives one count per size in the
#: range; ``None`` means every admissible count 1..size-1.
DesignatedSpec = Union[int, tuple[int, ...], None]


class ProblemFormatError(ValueError):
    """Malformed problem text."""


class ProblemMatrixMismatch(ValueError):
    """Matrix incompatible with a problem (signature, size, or designated
    count); distinct from a failing verdict."""


@dataclass(frozen=True)
class IndependenceProblem:
    name: str
    signature: frozenset[Connective]
    sizes: tuple[int, int]
    designated: DesignatedSpec
    kept: tuple[tuple[str, Formula], ...]
    target_name: str
    target: Formula

    def __post_init__(self):
        lo, hi = self.sizes
        if not 1 <= lo <= hi:
            raise ValueError(f"bad size range {lo}..{hi}")
        if Connective.IMP not in self.signature:
            raise ValueError("signature must contain implication")
        used = connectives_of(self.target)
        for _, f in self.kept:
            used |= connectives_of(f)
        if not used <= self.signature:
            missing = ", ".join(c.label for c in used - self.signature)
            raise ValueError(f"connectives outside signature: {missing}")
        for size in range(lo, hi + 1):
            if not self.designated_counts(size):
                raise ValueError(
                    f"no admissible designated count below size {size}"
                )

    def designated_counts(self, size: int) -> tuple[int, ...]:
        """Admissible designated counts at ``size``; at least one
        non-designated value must remain so the target can be falsified."""
        if self.designated is None:
            return tuple(range(1, size))
        if isinstance(self.designated, int):
            return (self.designated,) if self.designated < size else ()
        lo = self.sizes[0]
        d = self.designated[size - lo]
        return (d,) if d < size else ()

    def with_sizes(
        self, lo: int, hi: int, designated: DesignatedSpec = "keep"
    ) -> "IndependenceProblem":
        d = self.designated if designated == "keep" else designated
        if isinstance(d, tuple):
            raise ValueError("cannot re-range a per-size designated list")
        return replace(self, sizes=(lo, hi), designated=d)


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking one matrix against one problem."""

    passed: bool
    normality_ok: bool
    failures: tuple[tuple[str, Countermodel], ...]
    witness: Optional[Countermodel]


def check_solution(problem: IndependenceProblem, m: Matrix) -> Verdict:
    """Verify a matrix against a problem.

    Raises ProblemMatrixMismatch when the matrix does not even fit the
    problem (wrong signature, size, or designated count); returns a failing
    Verdict when it fits but does not solve it.
    """
    if not problem.signature <= m.signature:
        missing = ", ".join(
            c.label for c in problem.signature - m.signature
        )
        raise ProblemMatrixMismatch(f"matrix lacks connectives: {missing}")
    lo, hi = problem.sizes
    if not lo <= m.size <= hi:
        raise ProblemMatrixMismatch(
            f"matrix size {m.size} outside problem range {lo}..{hi}"
        )
    if m.designated not in problem.designated_counts(m.size):
        raise ProblemMatrixMismatch(
            f"matrix designated count {m.designated} does not match problem"
        )
    normality_ok = m.is_normal()
    failures = []
    for name, axiom in problem.kept:
        cm = m.find_countermodel(axiom)
        if cm is not None:
            failures.append((name, cm))
    witness = m.find_countermodel(problem.target)
    passed = normality_ok and not failures and witness is not None
    return Verdict(passed, normality_ok, tuple(failures), witness)


# --- built-in fixtures -------------------------------------------------------

FULL_SIGNATURE = frozenset(Connective)
IMP_ONLY = frozenset({Connective.IMP})

#: The twelve axioms of the full calculus, in display order.
AXIOMS: tuple[tuple[str, str], ...] = (
    ("K", "p -> q -> p"),
    ("S", "(p -> q -> r) -> (p -> q) -> p -> r"),
    ("peirce", "((p -> q) -> p) -> p"),
    ("andelimr", "p & q -> p"),
    ("andeliml", "p & q -> q"),
    ("andintro", "p -> q -> p & q"),
    ("orintror", "p -> p | q"),
    ("orintrol", "p -> q | p"),
    ("orelim", "p | q -> (p -> r) -> (q -> r) -> r"),
    ("contrap", "(p -> ~q) -> q -> ~p"),
    ("notelim", "~p -> p -> q"),
    ("falseelim", "F -> p"),
)

#: orelim with its two implication antecedents swapped; kept sets include
#: both orientations, which the built-in matrices all satisfy.
ORELIM_COMMUTED = ("orelimc", "p | q -> (q -> r) -> (p -> r) -> r")

#: Implication-only axioms of the second problem.
BPRIME_AXIOMS: tuple[tuple[str, str], ...] = (
    ("W", "(p -> p -> q) -> p -> q"),
    ("pon", "p -> (p -> q) -> q"),
    ("X", "((((p -> q) -> q) -> p) -> r) -> ((((q -> p) -> p) -> q) -> r) -> r"),
)

BPRIME = ("B'", "(p -> q) -> (q -> r) -> p -> r")

_PROBLEM_ALIASES = {
    "meyer-parks-Bprime": "meyer-parks-B'",
}

_MATRIX_ALIASES = {}


def _robinson_problem(target_name: str, sizes: tuple[int, int], designated: int):
    kept = []
    for name, text in AXIOMS:
        if name == target_name:
            continue
        kept.append((name, parse(text)))
        if name == "orelim":
            kept.append((ORELIM_COMMUTED[0], parse(ORELIM_COMMUTED[1])))
    kept = tuple(kept)
    target = parse(dict(AXIOMS)[target_name])
    return IndependenceProblem(
        name=f"robinson-{target_name}",
        signature=FULL_SIGNATURE,
        sizes=sizes,
        designated=designated,
        kept=kept,
        target_name=target_name,
        target=target,
    )


def builtin_problem(name: str) -> IndependenceProblem:
    """One of the bundled problems: robinson-S, robinson-K, meyer-parks-B'
    (alias meyer-parks-Bprime)."""
    name = _PROBLEM_ALIASES.get(name, name)
    if name == "robinson-S":
        return _robinson_problem("S", (5, 5), 1)
    if name == "robinson-K":
        return _robinson_problem("K", (4, 4), 3)
    if name == "meyer-parks-B'":
        return IndependenceProblem(
            name="meyer-parks-B'",
            signature=IMP_ONLY,
            sizes=(3, 3),
            designated=2,
            kept=tuple((n, parse(t)) for n, t in BPRIME_AXIOMS),
            target_name=BPRIME[0],
            target=parse(BPRIME[1]),
        )
    raise ValueError(f"unknown built-in problem {name!r}")


BUILTIN_PROBLEM_NAMES = ("robinson-S", "robinson-K", "meyer-parks-B'")


def builtin_matrix(name: str) -> Matrix:
    """One of the bundled matrices: M5, M4, M3, B2."""
    name = _MATRIX_ALIASES.get(name, name)
    if name == "M5":
        return Matrix(
            size=5,
            designated=1,
            imp=(
                (0, 1, 1, 1, 1),
                (0, 0, 0, 0, 0),
                (0, 0, 0, 0, 0),
                (0, 0, 4, 0, 4),
                (0, 0, 3, 3, 0),
            ),
            and_=(
                (0, 1, 1, 1, 1),
                (1, 1, 1, 1, 1),
                (1, 1, 1, 1, 1),
                (1, 1, 1, 1, 1),
                (1, 1, 1, 1, 1),
            ),
            or_=(
                (0, 0, 0, 0, 0),
                (0, 1, 1, 1, 1),
                (0, 1, 1, 1, 1),
                (0, 1, 1, 1, 1),
                (0, 1, 1, 1, 1),
            ),
            not_=(2, 0, 0, 1, 1),
            falsum=1,
        )
    if name == "M4":
        return Matrix(
            size=4,
            designated=3,
            imp=(
                (0, 0, 2, 3),
                (0, 0, 3, 3),
                (0, 0, 0, 3),
                (0, 0, 0, 0),
            ),
            and_=(
                (0, 0, 0, 3),
                (0, 0, 0, 3),
                (0, 0, 0, 3),
                (3, 3, 3, 3),
            ),
            or_=(
                (0, 0, 0, 0),
                (0, 0, 0, 0),
                (0, 0, 0, 0),
                (0, 0, 0, 3),
            ),
            not_=(3, 3, 3, 0),
            falsum=3,
        )
    if name == "M3":
        return Matrix(
            size=3,
            designated=2,
            imp=(
                (0, 0, 2),
                (0, 2, 2),
                (0, 0, 0),
            ),
        )
    if name == "B2":
        return Matrix(
            size=2,
            designated=1,
            imp=((0, 1), (0, 0)),
            and_=((0, 1), (1, 1)),
            or_=((0, 0), (0, 1)),
            not_=(1, 0),
            falsum=1,
        )
    raise ValueError(f"unknown built-in matrix {name!r}")


BUILTIN_MATRIX_NAMES = ("M5", "M4", "M3", "B2")


# --- problem file format -----------------------------------------------------

_CONN_LABELS = {c.label: c for c in Connective}


def parse_problem(text: str, name: str = "<anonymous>") -> IndependenceProblem:
    """Parse the line-oriented problem format.

    Example::

        signature: imp and or not false
        sizes: 5..5
        designated: 1
        keep K: p -> q -> p
        falsify S: (p -> q -> r) -> (p -> q) -> p -> r

    ``signature:`` defaults to the union of connectives used in the
    formulas; exactly one ``falsify`` line is required.
    """
    signature: Optional[frozenset[Connective]] = None
    sizes: Optional[tuple[int, int]] = None
    designated: DesignatedSpec = None
    designated_seen = False
    kept: list[tuple[str, Formula]] = []
    falsify: Optional[tuple[str, Formula]] = None

    def err(lineno: int, message: str):
        raise ProblemFormatError(f"{name}:{lineno}: {message}")

    def parse_formula(lineno: int, text: str) -> Formula:
        try:
            return parse(text)
        except ValueError as exc:
            err(lineno, f"malformed formula: {exc}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if ":" not in line:
            err(lineno, f"expected 'key: value', got {line!r}")
        if key == "signature":
            conns = set()
            for word in rest.split():
                if word not in _CONN_LABELS:
                    err(lineno, f"unknown connective {word!r}")
                conns.add(_CONN_LABELS[word])
            signature = frozenset(conns)
        elif key == "sizes":
            lo, sep, hi = rest.partition("..")
            try:
                sizes = (int(lo), int(hi) if sep else int(lo))
            except ValueError:
                err(lineno, f"expected 'sizes: A..B', got {rest!r}")
        elif key == "designated":
            designated_seen = True
            if rest == "all":
                designated = None
            else:
                try:
                    counts = tuple(int(w) for w in rest.split())
                except ValueError:
                    err(lineno, f"expected counts or 'all', got {rest!r}")
                if not counts:
                    err(lineno, "expected at least one designated count")
                designated = counts[0] if len(counts) == 1 else counts
        elif key == "keep" or key.startswith("keep "):
            axiom_name = key[4:].strip()
            if not axiom_name:
                err(lineno, "keep line needs an axiom name")
            kept.append((axiom_name, parse_formula(lineno, rest)))
        elif key == "falsify" or key.startswith("falsify "):
            if falsify is not None:
                err(lineno, "duplicate falsify line")
            axiom_name = key[7:].strip()
            if not axiom_name:
                err(lineno, "falsify line needs an axiom name")
            falsify = (axiom_name, parse_formula(lineno, rest))
        else:
            err(lineno, f"unknown directive {key.split()[0]!r}")

    if falsify is None:
        raise ProblemFormatError(f"{name}: missing falsify line")
    if sizes is None:
        raise ProblemFormatError(f"{name}: missing sizes line")
    if not designated_seen:
        raise ProblemFormatError(f"{name}: missing designated line")
    if signature is None:
        signature = frozenset({Connective.IMP}) | connectives_of(falsify[1])
        for _, f in kept:
            signature |= connectives_of(f)
    try:
        return IndependenceProblem(
            name=name,
            signature=signature,
            sizes=sizes,
            designated=designated,
            kept=tuple(kept),
            target_name=falsify[0],
            target=falsify[1],
        )
    except ValueError as exc:
        raise ProblemFormatError(f"{name}: {exc}") from None


def render_problem(problem: IndependenceProblem) -> str:
    """Problem in the file format; parse_problem round-trips it."""
    from .formula import render_formula

    sig = " ".join(c.label for c in Connective if c in problem.signature)
    lo, hi = problem.sizes
    if problem.designated is None:
        designated = "all"
    elif isinstance(problem.designated, tuple):
        designated = " ".join(str(d) for d in problem.designated)
    else:
        designated = str(problem.designated)
    lines = [
        f"signature: {sig}",
        f"sizes: {lo}..{hi}",
        f"designated: {designated}",
    ]
    for axiom_name, f in problem.kept:
        lines.append(f"keep {axiom_name}: {render_formula(f)}")
    lines.append(f"falsify {problem.target_name}: {render_formula(problem.target)}")
    return "\n".join(lines) + "\n"
