"""Partially-assigned matrices: the observable face of the search state.

``eval_partial`` evaluates a formula over a matrix whose table cells may
still be unassigned, reporting either the value (which any completion
would also produce) or the first blocking cell.  ``propagate`` is the
plain, trustworthy consistency check that the fast search kernels are
tested against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .formula import Connective, Formula, Var, variables_of
from .matrix import Assignment, Matrix
from .problems import IndependenceProblem


@dataclass(frozen=True)
class CellRef:
    """One table cell: ``row`` is the left operand (None for negation and
    falsum), ``col`` the right operand or the negation argument (None for
    falsum)."""

    conn: Connective
    row: Optional[int]
    col: Optional[int]

    def __str__(self):
        if self.conn is Connective.FALSE:
            return "false"
        if self.conn is Connective.NOT:
            return f"not({self.col})"
        return f"{self.conn.label}({self.row},{self.col})"


@dataclass(frozen=True)
class Known:
    value: int


@dataclass(frozen=True)
class Unknown:
    cell: CellRef


@dataclass
class PartialMatrix:
    """Mutable working copy of a matrix; ``None`` marks unassigned cells."""

    size: int
    designated: int
    imp: list[list[Optional[int]]]
    and_: Optional[list[list[Optional[int]]]] = None
    or_: Optional[list[list[Optional[int]]]] = None
    not_: Optional[list[Optional[int]]] = None
    falsum: Optional[int] = None
    has_falsum: bool = False

    @classmethod
    def empty(
        cls, size: int, designated: int, signature: frozenset[Connective]
    ) -> "PartialMatrix":
        def grid():
            return [[None] * size for _ in range(size)]

        return cls(
            size=size,
            designated=designated,
            imp=grid(),
            and_=grid() if Connective.AND in signature else None,
            or_=grid() if Connective.OR in signature else None,
            not_=[None] * size if Connective.NOT in signature else None,
            falsum=None,
            has_falsum=Connective.FALSE in signature,
        )

    @classmethod
    def from_matrix(cls, m: Matrix) -> "PartialMatrix":
        return cls(
            size=m.size,
            designated=m.designated,
            imp=[list(row) for row in m.imp],
            and_=[list(row) for row in m.and_] if m.and_ is not None else None,
            or_=[list(row) for row in m.or_] if m.or_ is not None else None,
            not_=list(m.not_) if m.not_ is not None else None,
            falsum=m.falsum,
            has_falsum=m.falsum is not None,
        )

    @property
    def signature(self) -> frozenset[Connective]:
        conns = {Connective.IMP}
        if self.and_ is not None:
            conns.add(Connective.AND)
        if self.or_ is not None:
            conns.add(Connective.OR)
        if self.not_ is not None:
            conns.add(Connective.NOT)
        if self.has_falsum:
            conns.add(Connective.FALSE)
        return frozenset(conns)

    def get(self, cell: CellRef) -> Optional[int]:
        if cell.conn is Connective.FALSE:
            return self.falsum
        if cell.conn is Connective.NOT:
            return self.not_[cell.col]
        return self._table2(cell.conn)[cell.row][cell.col]

    def set(self, cell: CellRef, value: Optional[int]) -> None:
        if value is not None and not 0 <= value < self.size:
            raise ValueError(f"value {value} out of range 0..{self.size - 1}")
        if cell.conn is Connective.FALSE:
            self.falsum = value
        elif cell.conn is Connective.NOT:
            self.not_[cell.col] = value
        else:
            self._table2(cell.conn)[cell.row][cell.col] = value

    def _table2(self, conn: Connective) -> list[list[Optional[int]]]:
        table = {
            Connective.IMP: self.imp,
            Connective.AND: self.and_,
            Connective.OR: self.or_,
        }[conn]
        if table is None:
            raise ValueError(f"{conn.label} not in signature")
        return table

    def cells(self) -> list[CellRef]:
        """All cells in the fixed search order: imp row-major, then and,
        or, not, falsum."""
        refs = []
        for conn in (Connective.IMP, Connective.AND, Connective.OR):
            if conn is Connective.IMP or self._has(conn):
                refs.extend(
                    CellRef(conn, x, y)
                    for x in range(self.size)
                    for y in range(self.size)
                )
        if self.not_ is not None:
            refs.extend(CellRef(Connective.NOT, None, x) for x in range(self.size))
        if self.has_falsum:
            refs.append(CellRef(Connective.FALSE, None, None))
        return refs

    def _has(self, conn: Connective) -> bool:
        return conn in self.signature

    def is_complete(self) -> bool:
        return all(self.get(cell) is not None for cell in self.cells())

    def to_matrix(self) -> Matrix:
        if not self.is_complete():
            raise ValueError("matrix has unassigned cells")
        return Matrix(
            size=self.size,
            designated=self.designated,
            imp=tuple(tuple(row) for row in self.imp),
            and_=tuple(tuple(row) for row in self.and_) if self.and_ is not None else None,
            or_=tuple(tuple(row) for row in self.or_) if self.or_ is not None else None,
            not_=tuple(self.not_) if self.not_ is not None else None,
            falsum=self.falsum,
        )


def eval_partial(
    pm: PartialMatrix, f: Formula, assignment: Assignment
) -> Union[Known, Unknown]:
    """Evaluate bottom-up, children left to right; stop at the first
    unassigned cell.  A Known result equals what every completion of
    ``pm`` would evaluate to."""
    if isinstance(f, Var):
        try:
            v = assignment[f.name]
        except KeyError:
            raise ValueError(f"unbound variable {f.name!r}") from None
        if not 0 <= v < pm.size:
            raise ValueError(f"value {v} for {f.name!r} out of range")
        return Known(v)
    conn = f.conn
    if conn is Connective.FALSE:
        if not pm.has_falsum:
            raise ValueError("falsum not in signature")
        if pm.falsum is None:
            return Unknown(CellRef(conn, None, None))
        return Known(pm.falsum)
    args = []
    for sub in f.args:
        r = eval_partial(pm, sub, assignment)
        if isinstance(r, Unknown):
            return r
        args.append(r.value)
    if conn is Connective.NOT:
        if pm.not_ is None:
            raise ValueError("negation not in signature")
        v = pm.not_[args[0]]
        if v is None:
            return Unknown(CellRef(conn, None, args[0]))
        return Known(v)
    v = pm._table2(conn)[args[0]][args[1]]
    if v is None:
        return Unknown(CellRef(conn, args[0], args[1]))
    return Known(v)


@dataclass(frozen=True)
class Contradiction:
    """Why a partial matrix cannot extend to a solution.

    ``kind`` is ``normality`` (a designated value sits at a designated-row,
    non-designated-column implication cell) or ``axiom`` (a kept axiom is
    already falsified under some assignment).
    """

    kind: str
    cell: Optional[CellRef] = None
    axiom: Optional[str] = None
    assignment: Optional[Assignment] = None

    def __str__(self):
        if self.kind == "normality":
            return f"normality violated at {self.cell}"
        binding = ", ".join(f"{k}={v}" for k, v in self.assignment.items())
        return f"kept axiom {self.axiom} falsified at {{{binding}}}"


def propagate(
    pm: PartialMatrix, problem: IndependenceProblem
) -> Optional[Contradiction]:
    """Naive full consistency scan; None means consistent.

    Sound: a Contradiction is returned only when no completion of ``pm``
    can solve ``problem``.  The target axiom is never a reason to reject,
    since an unassigned cell could still falsify it.
    """
    for x in range(pm.designated):
        for y in range(pm.designated, pm.size):
            v = pm.imp[x][y]
            if v is not None and v < pm.designated:
                return Contradiction("normality", cell=CellRef(Connective.IMP, x, y))
    for name, axiom in problem.kept:
        names = variables_of(axiom)
        for values in itertools.product(range(pm.size), repeat=len(names)):
            assignment = dict(zip(names, values))
            r = eval_partial(pm, axiom, assignment)
            if isinstance(r, Known) and r.value >= pm.designated:
                return Contradiction("axiom", axiom=name, assignment=assignment)
    return None
