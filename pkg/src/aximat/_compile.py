"""Flattening of a problem instance into the plain arrays the kernels run on.

Both the compiled and the pure-Python kernel consume the same
CompiledSearch value, so they explore identical trees and report identical
statistics.  Everything here is picklable plain data; worker processes
receive it directly.

Cell layout: implication row-major first, then conjunction, disjunction,
negation, falsum (for connectives in the signature).  Binary cell (x, y)
of a table at ``off`` lives at index ``off + x*n + y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .formula import (
    OP_AND,
    OP_FALSE,
    OP_IMP,
    OP_NOT,
    OP_OR,
    OP_VAR,
    Connective,
    Formula,
    compile_postfix,
)
from .matrix import Matrix
from .problems import IndependenceProblem

_LAYOUT_ORDER = (
    Connective.IMP,
    Connective.AND,
    Connective.OR,
    Connective.NOT,
    Connective.FALSE,
)


def compile_formula(f: Formula) -> tuple[tuple[int, ...], int, int]:
    """Return (postfix code, variable count, max stack depth)."""
    code, names, max_depth = compile_postfix(f)
    return code, len(names), max_depth


@dataclass(frozen=True)
class CompiledSearch:
    """One (size, designated count) search phase, flattened for a kernel."""

    n: int
    d: int
    conn_labels: tuple[str, ...]
    offsets: tuple[int, ...]
    n_cells: int
    init_vals: tuple[int, ...]  # -1 unassigned, else pinned
    domains: tuple[tuple[int, ...], ...]
    free_cells: tuple[int, ...]
    kept_progs: tuple[tuple[int, ...], ...]
    kept_nvars: tuple[int, ...]
    target_prog: tuple[int, ...]
    target_nvars: int
    max_stack: int
    infeasible: bool  # pinned cells already violate normality

    def offset_of(self, label: str) -> int:
        return self.offsets[self.conn_labels.index(label)]


def _table_cells(conn: Connective, n: int):
    if conn.arity == 2:
        return n * n
    if conn.arity == 1:
        return n
    return 1


def compile_search(
    problem: IndependenceProblem,
    size: int,
    d: int,
    fixed_tables: Optional[dict[str, object]] = None,
) -> CompiledSearch:
    """Flatten one search phase.

    ``fixed_tables`` maps connective labels to full tables (sequences of
    rows for binary connectives, a flat sequence for negation, an int for
    falsum) pinned before the search starts.
    """
    n = size
    conns = [c for c in _LAYOUT_ORDER if c in problem.signature]
    labels = tuple(c.label for c in conns)
    offsets = []
    n_cells = 0
    for c in conns:
        offsets.append(n_cells)
        n_cells += _table_cells(c, n)

    init_vals = [-1] * n_cells
    fixed_tables = fixed_tables or {}
    for label, table in fixed_tables.items():
        if label not in labels:
            raise ValueError(
                f"cannot pin {label!r}: not in the problem signature"
            )
        conn = Connective.from_label(label)
        off = offsets[labels.index(label)]
        if conn.arity == 2:
            rows = [list(row) for row in table]
            if len(rows) != n or any(len(r) != n for r in rows):
                raise ValueError(f"pinned {label} table must be {n}x{n}")
            flat = [v for row in rows for v in row]
        elif conn.arity == 1:
            flat = list(table)
            if len(flat) != n:
                raise ValueError(f"pinned {label} table must have {n} entries")
        else:
            flat = [int(table)]
        for i, v in enumerate(flat):
            if not 0 <= v < n:
                raise ValueError(f"pinned {label} entry {v} out of range 0..{n - 1}")
            init_vals[off + i] = v

    # normality as an up-front domain restriction: implication cells with a
    # designated row and non-designated column may only hold non-designated
    # values
    imp_off = offsets[labels.index("imp")]
    infeasible = False
    domains: list[tuple[int, ...]] = []
    full = tuple(range(n))
    high = tuple(range(d, n))
    for i in range(n_cells):
        if init_vals[i] >= 0:
            domains.append((init_vals[i],))
            continue
        rel = i - imp_off
        if 0 <= rel < n * n and rel // n < d <= rel % n:
            domains.append(high)
        else:
            domains.append(full)
    for x in range(d):
        for y in range(d, n):
            v = init_vals[imp_off + x * n + y]
            if 0 <= v < d:
                infeasible = True

    kept_progs = []
    kept_nvars = []
    max_stack = 1
    for _, axiom in problem.kept:
        code, nvars, depth = compile_formula(axiom)
        kept_progs.append(code)
        kept_nvars.append(nvars)
        max_stack = max(max_stack, depth)
    target_prog, target_nvars, depth = compile_formula(problem.target)
    max_stack = max(max_stack, depth)

    return CompiledSearch(
        n=n,
        d=d,
        conn_labels=labels,
        offsets=tuple(offsets),
        n_cells=n_cells,
        init_vals=tuple(init_vals),
        domains=tuple(domains),
        free_cells=tuple(i for i in range(n_cells) if init_vals[i] < 0),
        kept_progs=tuple(kept_progs),
        kept_nvars=tuple(kept_nvars),
        target_prog=target_prog,
        target_nvars=target_nvars,
        max_stack=max_stack,
        infeasible=infeasible,
    )


def matrix_from_cells(compiled: CompiledSearch, vals) -> Matrix:
    """Reassemble a Matrix from a full flat cell vector."""
    n = compiled.n
    tables: dict[str, object] = {}
    for label, off in zip(compiled.conn_labels, compiled.offsets):
        conn = Connective.from_label(label)
        if conn.arity == 2:
            tables[label] = tuple(
                tuple(vals[off + x * n + y] for y in range(n)) for x in range(n)
            )
        elif conn.arity == 1:
            tables[label] = tuple(vals[off + x] for x in range(n))
        else:
            tables[label] = vals[off]
    return Matrix(
        size=n,
        designated=compiled.d,
        imp=tables["imp"],
        and_=tables.get("and"),
        or_=tables.get("or"),
        not_=tables.get("not"),
        falsum=tables.get("false"),
    )


def decode_witness(
    compiled: CompiledSearch, target_vars: list[str], rank: int
) -> dict[str, int]:
    """Assignment for the rank-th target instance in canonical order (last
    variable cycling fastest)."""
    n = compiled.n
    values = []
    for _ in range(compiled.target_nvars):
        values.append(rank % n)
        rank //= n
    values.reverse()
    return dict(zip(target_vars, values))


def instance_values(n: int, nvars: int):
    """All assignments in canonical order as flat tuples."""
    return itertools.product(range(n), repeat=nvars)
