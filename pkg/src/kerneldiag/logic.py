"""Propositional formulas, parsing, and a small DPLL decision procedure.

Formulas are immutable trees.  Every set of formulas handled by the rest of the
package is ordered by :func:`formula_key`, which makes kernel enumeration,
incision choice and all printed output reproducible.
"""
from __future__ import annotations

import contextlib
import contextvars
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

__all__ = [
    "Formula", "Falsum", "Verum", "Atom", "Not", "And", "Or", "Implies",
    "FALSUM", "VERUM", "FormulaSyntaxError", "BeliefBase",
    "parse_formula", "render", "vars_of", "formula_key",
    "is_satisfiable", "entails", "count_sat_calls",
]


class Formula:
    """Base class of the formula AST."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Falsum(Formula):
    def __repr__(self):
        return "Falsum()"


@dataclass(frozen=True, repr=False)
class Verum(Formula):
    def __repr__(self):
        return "Verum()"


FALSUM = Falsum()
VERUM = Verum()

_ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_KEYWORDS = frozenset({"false", "true"})


@dataclass(frozen=True, order=True, repr=False)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _ATOM_RE.match(self.name):
            raise ValueError(f"invalid atom name: {self.name!r}")
        if self.name in _KEYWORDS:
            raise ValueError(f"{self.name!r} is a keyword, not an atom")

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


# --------------------------------------------------------------------------
# Rendering

_PREC = {Implies: 1, Or: 2, And: 3}
_SYMBOL = {Implies: "->", Or: "|", And: "&"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 4)


@lru_cache(maxsize=None)
def render(f: Formula) -> str:
    """Render ``f`` in the ASCII surface syntax with minimal parentheses.

    ``parse_formula(render(f)) == f`` holds for every formula.
    """
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, Verum):
        return "true"
    if isinstance(f, Not):
        inner = render(f.arg)
        return "!" + (f"({inner})" if _prec(f.arg) < 4 else inner)
    p = _prec(f)
    left, right = render(f.left), render(f.right)
    if isinstance(f, Implies):
        # right-associative
        if _prec(f.left) <= p:
            left = f"({left})"
        if _prec(f.right) < p:
            right = f"({right})"
    else:
        # left-associative
        if _prec(f.left) < p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


@lru_cache(maxsize=None)
def _size(f: Formula) -> int:
    if isinstance(f, Not):
        return 1 + _size(f.arg)
    if isinstance(f, (And, Or, Implies)):
        return 1 + _size(f.left) + _size(f.right)
    return 1


def formula_key(f: Formula) -> tuple[int, str]:
    """Canonical sort key: smaller formulas first, ties broken by rendering."""
    return (_size(f), render(f))


# --------------------------------------------------------------------------
# Parsing

class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<arrow>->)|(?P<op>[!&|()])|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unknown token {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("arrow", "op", "ident"):
            tokens.append((kind, m.group(), line, col))
        pos = m.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        found = tok[1] or "end of input"
        raise FormulaSyntaxError(f"{message}, found {found!r}", tok[2], tok[3])

    def formula(self) -> Formula:
        f = self.impl()
        if self.peek()[0] != "eof":
            self.fail("expected end of formula")
        return f

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, _, _ = tok = self.take()
        if value == "!":
            return Not(self.unary())
        if value == "(":
            f = self.impl()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if kind == "ident":
            if value == "false":
                return FALSUM
            if value == "true":
                return VERUM
            return Atom(value)
        self.fail("expected a formula", tok)


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula.

    Precedence from tightest: ``!``, ``&``, ``|``, ``->``; ``->`` associates
    to the right.  ``#`` starts a comment running to the end of the line.

    >>> parse_formula("!C & !F")
    And(Not(Atom('C')), Not(Atom('F')))
    """
    return _Parser(text).formula()


# --------------------------------------------------------------------------
# Variables

@lru_cache(maxsize=None)
def vars_of(f: Formula) -> frozenset[Atom]:
    """Atoms occurring in ``f``."""
    if isinstance(f, Atom):
        return frozenset((f,))
    if isinstance(f, Not):
        return vars_of(f.arg)
    if isinstance(f, (And, Or, Implies)):
        return vars_of(f.left) | vars_of(f.right)
    return frozenset()


# --------------------------------------------------------------------------
# Belief bases

class BeliefBase:
    """A finite set of formulas iterated in canonical order."""

    __slots__ = ("_items", "_order")

    def __init__(self, formulas: Iterable[Formula] = ()):
        items = frozenset(formulas)
        for f in items:
            if not isinstance(f, Formula):
                raise TypeError(f"not a formula: {f!r}")
        self._items = items
        self._order = tuple(sorted(items, key=formula_key))

    @classmethod
    def parse(cls, lines: Iterable[str]) -> "BeliefBase":
        return cls(parse_formula(s) for s in lines)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self._order)

    def __len__(self):
        return len(self._items)

    def __contains__(self, f):
        return f in self._items

    def __eq__(self, other):
        if isinstance(other, BeliefBase):
            return self._items == other._items
        if isinstance(other, (set, frozenset)):
            return self._items == other
        return NotImplemented

    def __hash__(self):
        return hash(self._items)

    def __or__(self, other: Iterable[Formula]) -> "BeliefBase":
        return BeliefBase(self._items.union(other))

    def __sub__(self, other: Iterable[Formula]) -> "BeliefBase":
        return BeliefBase(self._items.difference(other))

    def __le__(self, other):
        return self._items <= frozenset(other)

    def add(self, f: Formula) -> "BeliefBase":
        return self if f in self._items else BeliefBase(self._items | {f})

    def as_frozenset(self) -> frozenset[Formula]:
        return self._items

    def __repr__(self):
        return "BeliefBase({" + ", ".join(render(f) for f in self._order) + "})"


# --------------------------------------------------------------------------
# Satisfiability

Literal = tuple[str, bool]
Clause = frozenset  # of Literal

_sat_counter: contextvars.ContextVar[list[int] | None] = contextvars.ContextVar(
    "kerneldiag_sat_counter", default=None)


@contextlib.contextmanager
def count_sat_calls():
    """Count calls to :func:`is_satisfiable` made inside the block.

    Yields a one-element list whose value is updated in place.
    """
    counter = [0]
    token = _sat_counter.set(counter)
    try:
        yield counter
    finally:
        _sat_counter.reset(token)


def _nnf(f: Formula, positive: bool = True) -> Formula:
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Falsum):
        return FALSUM if positive else VERUM
    if isinstance(f, Verum):
        return VERUM if positive else FALSUM
    if isinstance(f, Not):
        return _nnf(f.arg, not positive)
    if isinstance(f, Implies):
        f = Or(Not(f.left), f.right)
    if isinstance(f, And):
        cls = And if positive else Or
        return cls(_nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Or):
        cls = Or if positive else And
        return cls(_nnf(f.left, positive), _nnf(f.right, positive))
    raise TypeError(f"not a formula: {f!r}")


def _cnf_of_nnf(f: Formula) -> frozenset[Clause]:
    if isinstance(f, Atom):
        return frozenset({frozenset({(f.name, True)})})
    if isinstance(f, Not):
        return frozenset({frozenset({(f.arg.name, False)})})
    if isinstance(f, Falsum):
        return frozenset({frozenset()})
    if isinstance(f, Verum):
        return frozenset()
    if isinstance(f, And):
        return _cnf_of_nnf(f.left) | _cnf_of_nnf(f.right)
    left, right = _cnf_of_nnf(f.left), _cnf_of_nnf(f.right)
    out = set()
    for a in left:
        for b in right:
            c = a | b
            if not any((name, not sign) in c for name, sign in c):
                out.add(c)
    return frozenset(out)


@lru_cache(maxsize=4096)
def clauses_of(f: Formula) -> frozenset[Clause]:
    """Naive CNF of ``f`` with tautological clauses dropped."""
    return _cnf_of_nnf(_nnf(f))


def _dpll(clauses: list[Clause]) -> bool:
    assignment: dict[str, bool] = {}
    while True:
        # unit propagation with simplification
        simplified = []
        unit = None
        for c in clauses:
            rest = []
            satisfied = False
            for name, sign in c:
                value = assignment.get(name)
                if value is None:
                    rest.append((name, sign))
                elif value == sign:
                    satisfied = True
                    break
            if satisfied:
                continue
            if not rest:
                return False
            if len(rest) == 1 and unit is None:
                unit = rest[0]
            simplified.append(rest)
        if not simplified:
            return True
        if unit is None:
            break
        assignment[unit[0]] = unit[1]
        clauses = [frozenset(c) for c in simplified]
    clauses = [frozenset(c) for c in simplified]
    name = min(n for c in clauses for n, _ in c)
    for value in (True, False):
        if _dpll(clauses + [frozenset({(name, value)})]):
            return True
    return False


def is_satisfiable(base: Iterable[Formula]) -> bool:
    """True iff some truth assignment satisfies every formula of ``base``."""
    counter = _sat_counter.get()
    if counter is not None:
        counter[0] += 1
    clauses: set[Clause] = set()
    for f in base:
        clauses |= clauses_of(f)
    if frozenset() in clauses:
        return False
    return _dpll(sorted(clauses, key=lambda c: (len(c), sorted(c))))


def entails(base: Iterable[Formula], f: Formula) -> bool:
    """Classical consequence by refutation: ``base`` plus ``!f`` is unsatisfiable."""
    return not is_satisfiable([*base, Not(f)])
