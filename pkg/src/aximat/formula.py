"""Propositional formula AST, text syntax, parser, and printer.

The connective set is implication, conjunction, disjunction, negation, and
falsum; both negation and falsum are primitive.  Concrete syntax::

    variables   lowercase identifiers: p, q, r, my_var
    falsum      F           (alias: ⊥)
    negation    ~a          (alias: ¬)
    conjunction a & b       (alias: ∧)
    disjunction a | b       (alias: ∨)
    implication a -> b      (alias: →)

Precedence is ``~`` > ``&`` > ``|`` > ``->``; conjunction and disjunction
associate to the left, implication to the right, so ``p -> q -> p`` reads
``p -> (q -> p)``.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass


class Connective(enum.Enum):
    """A primitive connective together with its fixed arity."""

    IMP = ("imp", 2)
    AND = ("and", 2)
    OR = ("or", 2)
    NOT = ("not", 1)
    FALSE = ("false", 0)

    def __init__(self, label: str, arity: int):
        self.label = label
        self.arity = arity

    @classmethod
    def from_label(cls, label: str) -> "Connective":
        for conn in cls:
            if conn.label == label:
                return conn
        raise ValueError(f"unknown connective {label!r}")


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not _is_identifier(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")


@dataclass(frozen=True)
class Apply:
    conn: Connective
    args: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.args) != self.conn.arity:
            raise ValueError(
                f"{self.conn.label} takes {self.conn.arity} arguments, "
                f"got {len(self.args)}"
            )


Formula = Var | Apply


def imp(a: Formula, b: Formula) -> Formula:
    return Apply(Connective.IMP, (a, b))


def and_(a: Formula, b: Formula) -> Formula:
    return Apply(Connective.AND, (a, b))


def or_(a: Formula, b: Formula) -> Formula:
    return Apply(Connective.OR, (a, b))


def not_(a: Formula) -> Formula:
    return Apply(Connective.NOT, (a,))


def falsum() -> Formula:
    return Apply(Connective.FALSE, ())


def variables_of(f: Formula) -> list[str]:
    """Distinct variable names in order of first occurrence, left to right."""
    seen: list[str] = []
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            if node.name not in seen:
                seen.append(node.name)
        else:
            stack.extend(reversed(node.args))
    return seen


def connectives_of(f: Formula) -> frozenset[Connective]:
    """Set of connectives occurring in the formula."""
    found: set[Connective] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Apply):
            found.add(node.conn)
            stack.extend(node.args)
    return frozenset(found)


class ParseError(ValueError):
    """Syntax error; ``offset`` is the byte offset into the input text."""

    def __init__(self, message: str, text: str, pos: int):
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"at byte {self.offset}: {message}")


def _is_identifier(name: str) -> bool:
    return (
        name != ""
        and name[0].isascii()
        and name[0].islower()
        and all(c.isascii() and (c.islower() or c.isdigit() or c == "_") for c in name)
    )


# token kinds
_ARROW, _AND, _OR, _NOT, _LPAREN, _RPAREN, _FALSUM, _IDENT, _END = range(9)

_SINGLE = {
    "&": _AND,
    "∧": _AND,
    "|": _OR,
    "∨": _OR,
    "~": _NOT,
    "¬": _NOT,
    "(": _LPAREN,
    ")": _RPAREN,
    "→": _ARROW,
    "⊥": _FALSUM,
    "F": _FALSUM,
}


def _tokenize(text: str) -> list[tuple[int, str, int]]:
    """Return (kind, lexeme, position) triples, ending with an _END token."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _SINGLE:
            tokens.append((_SINGLE[c], c, i))
            i += 1
            continue
        if c == "-":
            if i + 1 < n and text[i + 1] == ">":
                tokens.append((_ARROW, "->", i))
                i += 2
                continue
            raise ParseError("expected '->'", text, i)
        if c.isascii() and c.islower():
            j = i + 1
            while j < n and text[j].isascii() and (
                text[j].islower() or text[j].isdigit() or text[j] == "_"
            ):
                j += 1
            tokens.append((_IDENT, text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", text, i)
    tokens.append((_END, "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> int:
        return self.tokens[self.pos][0]

    def advance(self) -> tuple[int, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: str):
        _, lexeme, at = self.tokens[self.pos]
        found = repr(lexeme) if lexeme else "end of input"
        raise ParseError(f"expected {expected}, found {found}", self.text, at)

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == _ARROW:
            self.advance()
            return imp(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == _OR:
            self.advance()
            f = or_(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == _AND:
            self.advance()
            f = and_(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.peek() == _NOT:
            self.advance()
            return not_(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind = self.peek()
        if kind == _IDENT:
            return Var(self.advance()[1])
        if kind == _FALSUM:
            self.advance()
            return falsum()
        if kind == _LPAREN:
            self.advance()
            f = self.implication()
            if self.peek() != _RPAREN:
                self.fail("')'")
            self.advance()
            return f
        self.fail("a variable, 'F', '~', or '('")


def parse(text: str) -> Formula:
    """Parse a formula; raises ParseError with byte offset on bad syntax."""
    parser = _Parser(text)
    f = parser.implication()
    if parser.peek() != _END:
        parser.fail("end of input or an operator")
    return f


# postfix opcodes for table-driven evaluation loops; programs are flat
# (op, arg) pairs
OP_VAR = 0
OP_IMP = 1
OP_AND = 2
OP_OR = 3
OP_NOT = 4
OP_FALSE = 5

_OP_FOR_CONN = {
    Connective.IMP: OP_IMP,
    Connective.AND: OP_AND,
    Connective.OR: OP_OR,
    Connective.NOT: OP_NOT,
    Connective.FALSE: OP_FALSE,
}


def compile_postfix(f: Formula) -> tuple[tuple[int, ...], list[str], int]:
    """Flatten a formula to postfix code over variable indices.

    Returns (code, variable names in first-occurrence order, max stack
    depth).  Evaluation pushes variables/falsum and applies connectives to
    the top of the stack, children left to right.
    """
    code, names, depth = _compile_postfix_cached(f)
    return code, list(names), depth


@functools.lru_cache(maxsize=512)
def _compile_postfix_cached(f: Formula) -> tuple[tuple[int, ...], tuple[str, ...], int]:
    names = variables_of(f)
    index = {name: i for i, name in enumerate(names)}
    code: list[int] = []
    max_depth = 0
    depth = 0

    def walk(node: Formula):
        nonlocal depth, max_depth
        if isinstance(node, Var):
            code.extend((OP_VAR, index[node.name]))
            depth += 1
        elif node.conn is Connective.FALSE:
            code.extend((OP_FALSE, 0))
            depth += 1
        else:
            for arg in node.args:
                walk(arg)
            code.extend((_OP_FOR_CONN[node.conn], 0))
            depth -= node.conn.arity - 1
        max_depth = max(max_depth, depth)

    walk(f)
    return tuple(code), tuple(names), max_depth


# precedence for the printer; higher binds tighter
_PREC = {Connective.IMP: 1, Connective.OR: 2, Connective.AND: 3, Connective.NOT: 4}
_ATOM_PREC = 5
_BINOP_TEXT = {Connective.IMP: " -> ", Connective.OR: " | ", Connective.AND: " & "}


def _prec(f: Formula) -> int:
    if isinstance(f, Var) or f.conn is Connective.FALSE:
        return _ATOM_PREC
    return _PREC[f.conn]


def render_formula(f: Formula) -> str:
    """Minimal-parentheses text; ``parse(render_formula(f))`` equals ``f``."""
    if isinstance(f, Var):
        return f.name
    if f.conn is Connective.FALSE:
        return "F"
    if f.conn is Connective.NOT:
        inner = render_formula(f.args[0])
        if _prec(f.args[0]) < _PREC[Connective.NOT]:
            inner = f"({inner})"
        return f"~{inner}"
    # binary: implication is right-associative, the rest left-associative
    prec = _PREC[f.conn]
    left, right = (render_formula(arg) for arg in f.args)
    if f.conn is Connective.IMP:
        if _prec(f.args[0]) <= prec:
            left = f"({left})"
        if _prec(f.args[1]) < prec:
            right = f"({right})"
    else:
        if _prec(f.args[0]) < prec:
            left = f"({left})"
        if _prec(f.args[1]) <= prec:
            right = f"({right})"
    return f"{left}{_BINOP_TEXT[f.conn]}{right}"
