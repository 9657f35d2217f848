"""Finite logical matrices: evaluation, normality, validity, symmetry.

A matrix interprets each connective of its signature by a finite truth
table over the values ``0..size-1``.  The designated values (those counted
as "true") are always the initial segment ``0..designated-1``.  A formula
is valid in a matrix when every assignment of values to its variables
evaluates to a designated value.

Binary tables are stored row-major with the row index as the left operand,
so ``imp[x][y]`` is the value of ``x -> y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from .formula import (
    OP_AND,
    OP_FALSE,
    OP_IMP,
    OP_NOT,
    OP_OR,
    OP_VAR,
    Connective,
    Formula,
    Var,
    compile_postfix,
)

Assignment = dict[str, int]
Permutation = tuple[int, ...]

Table2 = tuple[tuple[int, ...], ...]
Table1 = tuple[int, ...]


class Countermodel(NamedTuple):
    """An assignment under which a formula takes a non-designated value."""

    assignment: Assignment
    value: int


class MatrixFormatError(ValueError):
    """Malformed matrix text (native file format)."""


def _check_table2(name: str, table, size: int) -> Table2:
    table = tuple(tuple(row) for row in table)
    if len(table) != size or any(len(row) != size for row in table):
        raise ValueError(f"{name} table must be {size}x{size}")
    for row in table:
        for v in row:
            if not 0 <= v < size:
                raise ValueError(f"{name} entry {v} out of range 0..{size - 1}")
    return table


@dataclass(frozen=True)
class Matrix:
    """An immutable finite logical matrix.

    ``imp`` is always present; ``and_``, ``or_``, ``not_``, and ``falsum``
    are ``None`` when the corresponding connective is outside the
    signature.
    """

    size: int
    designated: int
    imp: Table2
    and_: Optional[Table2] = None
    or_: Optional[Table2] = None
    not_: Optional[Table1] = None
    falsum: Optional[int] = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("size must be at least 1")
        if not 1 <= self.designated <= self.size:
            raise ValueError("designated count must be in 1..size")
        object.__setattr__(self, "imp", _check_table2("imp", self.imp, self.size))
        for name in ("and_", "or_"):
            table = getattr(self, name)
            if table is not None:
                object.__setattr__(
                    self, name, _check_table2(name.rstrip("_"), table, self.size)
                )
        if self.not_ is not None:
            not_ = tuple(self.not_)
            if len(not_) != self.size:
                raise ValueError(f"not table must have {self.size} entries")
            for v in not_:
                if not 0 <= v < self.size:
                    raise ValueError(f"not entry {v} out of range")
            object.__setattr__(self, "not_", not_)
        if self.falsum is not None and not 0 <= self.falsum < self.size:
            raise ValueError(f"falsum value {self.falsum} out of range")

    @property
    def signature(self) -> frozenset[Connective]:
        conns = {Connective.IMP}
        if self.and_ is not None:
            conns.add(Connective.AND)
        if self.or_ is not None:
            conns.add(Connective.OR)
        if self.not_ is not None:
            conns.add(Connective.NOT)
        if self.falsum is not None:
            conns.add(Connective.FALSE)
        return frozenset(conns)

    def is_designated(self, v: int) -> bool:
        if not 0 <= v < self.size:
            raise ValueError(f"value {v} out of range 0..{self.size - 1}")
        return v < self.designated

    def evaluate(self, f: Formula, assignment: Assignment) -> int:
        """Bottom-up table lookup of ``f`` under ``assignment``."""
        if isinstance(f, Var):
            try:
                v = assignment[f.name]
            except KeyError:
                raise ValueError(f"unbound variable {f.name!r}") from None
            if not 0 <= v < self.size:
                raise ValueError(f"value {v} for {f.name!r} out of range")
            return v
        conn = f.conn
        if conn is Connective.IMP:
            return self.imp[self.evaluate(f.args[0], assignment)][
                self.evaluate(f.args[1], assignment)
            ]
        if conn is Connective.AND:
            if self.and_ is None:
                raise ValueError("conjunction not in matrix signature")
            return self.and_[self.evaluate(f.args[0], assignment)][
                self.evaluate(f.args[1], assignment)
            ]
        if conn is Connective.OR:
            if self.or_ is None:
                raise ValueError("disjunction not in matrix signature")
            return self.or_[self.evaluate(f.args[0], assignment)][
                self.evaluate(f.args[1], assignment)
            ]
        if conn is Connective.NOT:
            if self.not_ is None:
                raise ValueError("negation not in matrix signature")
            return self.not_[self.evaluate(f.args[0], assignment)]
        if self.falsum is None:
            raise ValueError("falsum not in matrix signature")
        return self.falsum

    def is_normal(self) -> bool:
        """True iff a designated antecedent and implication force a
        designated consequent; equivalent to modus ponens preserving
        validity."""
        for x in range(self.designated):
            for y in range(self.designated, self.size):
                if self.imp[x][y] < self.designated:
                    return False
        return True

    def find_countermodel(self, f: Formula) -> Optional[Countermodel]:
        """First countermodel in canonical assignment order, or None.

        Assignments enumerate variables in first-occurrence order with the
        last variable cycling fastest and values ascending.
        """
        code, names, _ = compile_postfix(f)
        n = self.size
        flat: list[Optional[tuple]] = [None] * 6
        flat[OP_IMP] = tuple(v for row in self.imp for v in row)
        if self.and_ is not None:
            flat[OP_AND] = tuple(v for row in self.and_ for v in row)
        if self.or_ is not None:
            flat[OP_OR] = tuple(v for row in self.or_ for v in row)
        used = set(code[::2])
        for op, table, label in (
            (OP_AND, self.and_, "conjunction"),
            (OP_OR, self.or_, "disjunction"),
            (OP_NOT, self.not_, "negation"),
            (OP_FALSE, self.falsum, "falsum"),
        ):
            if op in used and table is None:
                raise ValueError(f"{label} not in matrix signature")
        not_table = self.not_
        falsum = self.falsum
        d = self.designated
        end = len(code)
        for values in itertools.product(range(n), repeat=len(names)):
            stack: list[int] = []
            pos = 0
            while pos < end:
                op = code[pos]
                arg = code[pos + 1]
                pos += 2
                if op == OP_VAR:
                    stack.append(values[arg])
                elif op == OP_FALSE:
                    stack.append(falsum)
                elif op == OP_NOT:
                    stack[-1] = not_table[stack[-1]]
                else:
                    y = stack.pop()
                    stack[-1] = flat[op][stack[-1] * n + y]
            if stack[0] >= d:
                return Countermodel(dict(zip(names, values)), stack[0])
        return None

    def validates(self, f: Formula) -> bool:
        return self.find_countermodel(f) is None

    def apply_permutation(self, perm: Permutation) -> "Matrix":
        """Conjugate every table by a designation-preserving permutation."""
        check_permutation(perm, self.size, self.designated)
        inv = [0] * self.size
        for i, p in enumerate(perm):
            inv[p] = i

        def conj2(table: Table2) -> Table2:
            return tuple(
                tuple(perm[table[inv[x]][inv[y]]] for y in range(self.size))
                for x in range(self.size)
            )

        return Matrix(
            size=self.size,
            designated=self.designated,
            imp=conj2(self.imp),
            and_=conj2(self.and_) if self.and_ is not None else None,
            or_=conj2(self.or_) if self.or_ is not None else None,
            not_=tuple(perm[self.not_[inv[x]]] for x in range(self.size))
            if self.not_ is not None
            else None,
            falsum=perm[self.falsum] if self.falsum is not None else None,
        )

    def flatten(self) -> tuple[int, ...]:
        """Table cells in the fixed global order: imp row-major, then and,
        or, not, falsum."""
        cells: list[int] = []
        for table in (self.imp, self.and_, self.or_):
            if table is not None:
                for row in table:
                    cells.extend(row)
        if self.not_ is not None:
            cells.extend(self.not_)
        if self.falsum is not None:
            cells.append(self.falsum)
        return tuple(cells)

    def canonical_form(self) -> "Matrix":
        """Lexicographically least matrix in the isomorphism orbit.

        Brute force over all designated!*(size-designated)! permutations;
        group sizes stay tiny at the sizes this library targets.
        """
        best = self
        best_key = self.flatten()
        for perm in designation_preserving_permutations(self.size, self.designated):
            candidate = self.apply_permutation(perm)
            key = candidate.flatten()
            if key < best_key:
                best, best_key = candidate, key
        return best


def check_permutation(perm: Permutation, size: int, designated: int) -> None:
    if sorted(perm) != list(range(size)):
        raise ValueError(f"not a permutation of 0..{size - 1}: {perm}")
    if sorted(perm[:designated]) != list(range(designated)):
        raise ValueError(
            f"permutation {perm} does not preserve designated values 0..{designated - 1}"
        )


def designation_preserving_permutations(
    size: int, designated: int
) -> Iterator[Permutation]:
    """All permutations of 0..size-1 mapping the designated block onto
    itself and the non-designated block onto itself."""
    lows = itertools.permutations(range(designated))
    for low in lows:
        for high in itertools.permutations(range(designated, size)):
            yield low + high


# --- native file format ----------------------------------------------------

_BLOCK_ORDER = ("imp", "and", "or", "not", "false")


def parse_matrix(text: str) -> Matrix:
    """Parse the native line-oriented matrix format.

    Example (blocks for absent connectives are simply omitted)::

        size 3
        designated 2
        imp
        0 0 2
        1 0 2 2
        2 0 0 0
    """
    lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))

    def err(lineno: int, message: str):
        raise MatrixFormatError(f"line {lineno}: {message}")

    def ints(lineno: int, words: list[str]) -> list[int]:
        try:
            return [int(w) for w in words]
        except ValueError:
            err(lineno, f"expected integers, got {' '.join(words)!r}")

    pos = 0

    def take(expected: str) -> list[str]:
        nonlocal pos
        if pos >= len(lines):
            raise MatrixFormatError(f"unexpected end of input, expected {expected}")
        lineno, line = lines[pos]
        pos += 1
        return [lineno, *line.split()]

    lineno, *words = take("'size N'")
    if len(words) != 2 or words[0] != "size":
        err(lineno, "expected 'size N'")
    size = ints(lineno, words[1:])[0]
    if size < 1:
        err(lineno, "size must be at least 1")

    lineno, *words = take("'designated D'")
    if len(words) != 2 or words[0] != "designated":
        err(lineno, "expected 'designated D'")
    designated = ints(lineno, words[1:])[0]
    if not 1 <= designated <= size:
        err(lineno, f"designated count {designated} out of range 1..{size}")

    tables: dict[str, object] = {}
    while pos < len(lines):
        lineno, *words = take("a connective block")
        name = words[0]
        if name not in _BLOCK_ORDER:
            err(lineno, f"unknown connective {name!r}")
        if name in tables:
            err(lineno, f"duplicate {name} block")
        if name in ("imp", "and", "or"):
            if len(words) != 1:
                err(lineno, f"{name} rows must start on the following line")
            rows = []
            for _ in range(size):
                row_lineno, *row_words = take(f"a row of the {name} table")
                row = ints(row_lineno, row_words)
                if len(row) != size:
                    err(row_lineno, f"expected {size} entries, got {len(row)}")
                for v in row:
                    if not 0 <= v < size:
                        err(row_lineno, f"entry {v} out of range 0..{size - 1}")
                rows.append(tuple(row))
            tables[name] = tuple(rows)
        elif name == "not":
            row = ints(lineno, words[1:])
            if len(row) != size:
                err(lineno, f"expected {size} entries after 'not'")
            for v in row:
                if not 0 <= v < size:
                    err(lineno, f"entry {v} out of range 0..{size - 1}")
            tables["not"] = tuple(row)
        else:  # false
            row = ints(lineno, words[1:])
            if len(row) != 1:
                err(lineno, "expected a single value after 'false'")
            if not 0 <= row[0] < size:
                err(lineno, f"entry {row[0]} out of range 0..{size - 1}")
            tables["false"] = row[0]

    if "imp" not in tables:
        raise MatrixFormatError("missing mandatory imp block")
    return Matrix(
        size=size,
        designated=designated,
        imp=tables["imp"],
        and_=tables.get("and"),
        or_=tables.get("or"),
        not_=tables.get("not"),
        falsum=tables.get("false"),
    )


def render_matrix(m: Matrix, fmt: str = "native") -> str:
    """Render a matrix as ``native``, ``markdown``, or ``latex`` text."""
    if fmt == "native":
        return _render_native(m)
    if fmt == "markdown":
        return _render_markdown(m)
    if fmt == "latex":
        return _render_latex(m)
    raise ValueError(f"unknown format {fmt!r}; expected native, markdown, or latex")


def _render_native(m: Matrix) -> str:
    out = [f"size {m.size}", f"designated {m.designated}"]
    for name, table in (("imp", m.imp), ("and", m.and_), ("or", m.or_)):
        if table is None:
            continue
        out.append(name)
        for row in table:
            out.append(" ".join(str(v) for v in row))
    if m.not_ is not None:
        out.append("not " + " ".join(str(v) for v in m.not_))
    if m.falsum is not None:
        out.append(f"false {m.falsum}")
    return "\n".join(out) + "\n"


_MD_SYMBOL = {"imp": "→", "and": "∧", "or": "∨", "not": "¬", "false": "⊥"}


def _render_markdown(m: Matrix) -> str:
    blocks = []
    header = range(m.size)
    for name, table in (("imp", m.imp), ("and", m.and_), ("or", m.or_)):
        if table is None:
            continue
        lines = [
            "| " + " | ".join([_MD_SYMBOL[name], *(str(v) for v in header)]) + " |",
            "|" + "---|" * (m.size + 1),
        ]
        for x, row in enumerate(table):
            lines.append(
                "| " + " | ".join([str(x), *(str(v) for v in row)]) + " |"
            )
        blocks.append("\n".join(lines))
    if m.not_ is not None:
        lines = ["|  | ¬ |", "|---|---|"]
        for x, v in enumerate(m.not_):
            lines.append(f"| {x} | {v} |")
        blocks.append("\n".join(lines))
    if m.falsum is not None:
        blocks.append("\n".join(["| ⊥ |", "|---|", f"| {m.falsum} |"]))
    return "\n\n".join(blocks) + "\n"


_TEX_SYMBOL = {"imp": r"$\to$", "and": r"$\wedge$", "or": r"$\vee$"}


def _render_latex(m: Matrix) -> str:
    blocks = []
    for name, table in (("imp", m.imp), ("and", m.and_), ("or", m.or_)):
        if table is None:
            continue
        lines = [
            r"\begin{tabular}{|c|" + "c" * m.size + "|}",
            r"\hline",
            "&".join([_TEX_SYMBOL[name], *(str(v) for v in range(m.size))]) + r"\\",
            r"\hline",
        ]
        for x, row in enumerate(table):
            lines.append("&".join([str(x), *(str(v) for v in row)]) + r"\\")
        lines += [r"\hline", r"\end{tabular}"]
        blocks.append("\n".join(lines))
    if m.not_ is not None:
        lines = [
            r"\begin{tabular}{|c|c|}",
            r"\hline",
            r"&$\neg$\\",
            r"\hline",
        ]
        for x, v in enumerate(m.not_):
            lines.append(f"{x}&{v}" + r"\\")
        lines += [r"\hline", r"\end{tabular}"]
        blocks.append("\n".join(lines))
    if m.falsum is not None:
        blocks.append(
            "\n".join(
                [
                    r"\begin{tabular}{|c|}",
                    r"\hline",
                    r"$\bot$\\",
                    r"\hline",
                    str(m.falsum) + r"\\",
                    r"\hline",
                    r"\end{tabular}",
                ]
            )
        )
    return "\n\\quad\n".join(blocks) + "\n"
