"""Propositional feature constraints and product configurations.

Formulas are immutable ASTs compared structurally.  Satisfiability is
never decided over all valuations, only by enumerating an explicit set of
product configurations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class FormulaError(ValueError):
    """Raised for malformed formula text or undeclared features."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Const, Var, Not, And, Or]

TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class ProductConfig:
    """A named total assignment of truth values to features."""

    name: str
    assignment: tuple[tuple[str, bool], ...]

    @classmethod
    def of(cls, name: str, values: Mapping[str, bool]) -> "ProductConfig":
        return cls(name, tuple(sorted(values.items())))

    def as_dict(self) -> dict[str, bool]:
        return dict(self.assignment)

    def __getitem__(self, feature: str) -> bool:
        for f, v in self.assignment:
            if f == feature:
                return v
        raise KeyError(feature)

    def features(self) -> frozenset[str]:
        return frozenset(f for f, _ in self.assignment)

    def same_valuation(self, other: "ProductConfig") -> bool:
        return self.assignment == other.assignment


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:([!&|()])|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(3) is not None:
            raise FormulaError(f"unexpected character {m.group(3)!r}", m.start(3))
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, features: Iterable[str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.features = None if features is None else set(features)

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaError("unexpected end of input", len(self.text))
        self.i += 1
        return tok

    def formula(self) -> Formula:
        node = self.conj()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        if self.peek() == "!":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        pos = self.pos()
        tok = self.take()
        if tok == "(":
            node = self.formula()
            if self.peek() != ")":
                raise FormulaError("expected ')'", self.pos())
            self.take()
            return node
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if IDENT_RE.fullmatch(tok):
            if self.features is not None and tok not in self.features:
                raise FormulaError(f"undeclared feature {tok!r}", pos)
            return Var(tok)
        raise FormulaError(f"unexpected token {tok!r}", pos)


def parse_formula(text: str, features: Iterable[str] | None = None) -> Formula:
    """Parse ``text`` using ``!`` > ``&`` > ``|`` precedence.

    When ``features`` is given, every identifier must be one of them.
    """
    p = _Parser(text, features)
    if not p.tokens:
        raise FormulaError("empty formula", 0)
    node = p.formula()
    if p.peek() is not None:
        raise FormulaError(f"unexpected token {p.peek()!r}", p.pos())
    return node


# --------------------------------------------------------------------------
# printing

_PREC = {Or: 1, And: 2, Not: 3, Var: 4, Const: 4}


def format_formula(phi: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``phi``."""
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Not):
        inner = format_formula(phi.arg)
        return "!" + (f"({inner})" if _PREC[type(phi.arg)] < 3 else inner)
    op = " & " if isinstance(phi, And) else " | "
    prec = _PREC[type(phi)]
    left = format_formula(phi.left)
    right = format_formula(phi.right)
    if _PREC[type(phi.left)] < prec:
        left = f"({left})"
    if _PREC[type(phi.right)] <= prec:
        right = f"({right})"
    return left + op + right


# --------------------------------------------------------------------------
# semantics

def variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Const):
        return frozenset()
    if isinstance(phi, Var):
        return frozenset([phi.name])
    if isinstance(phi, Not):
        return variables(phi.arg)
    return variables(phi.left) | variables(phi.right)


def evaluate(phi: Formula, product: ProductConfig | Mapping[str, bool]) -> bool:
    """Return whether ``product`` satisfies ``phi``.

    Raises KeyError if ``phi`` mentions a feature the product does not assign.
    """
    values = product.as_dict() if isinstance(product, ProductConfig) else product
    return _eval(phi, values)


def _eval(phi: Formula, values: Mapping[str, bool]) -> bool:
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Var):
        return values[phi.name]
    if isinstance(phi, Not):
        return not _eval(phi.arg, values)
    if isinstance(phi, And):
        return _eval(phi.left, values) and _eval(phi.right, values)
    return _eval(phi.left, values) or _eval(phi.right, values)


def sat_in(phi: Formula, products: Iterable[ProductConfig]) -> list[ProductConfig]:
    """Products that satisfy ``phi``, in the order given."""
    return [p for p in products if evaluate(phi, p)]


def config_formula(product: ProductConfig, features: Iterable[str]) -> Formula:
    """Characteristic conjunction of ``product`` over ``features`` (in order)."""
    node: Formula | None = None
    for f in features:
        lit: Formula = Var(f) if product[f] else Not(Var(f))
        node = lit if node is None else And(node, lit)
    return TRUE if node is None else node


def conj(*parts: Formula) -> Formula:
    node = parts[0]
    for p in parts[1:]:
        node = And(node, p)
    return node


def disj(parts: Iterable[Formula]) -> Formula:
    node: Formula | None = None
    for p in parts:
        node = p if node is None else Or(node, p)
    return FALSE if node is None else node


def syntactically_equal(phi: Formula, psi: Formula) -> bool:
    return phi == psi


def equivalent_over(phi: Formula, psi: Formula, products: Iterable[ProductConfig]) -> bool:
    """Semantic equality restricted to a finite set of products."""
    return all(evaluate(phi, p) == evaluate(psi, p) for p in products)
