"""Inequality-claim language.

Grammar::

    chain  := expr (("<=" | ">=") expr)+
    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := atom ("^" integer)*
    atom   := number | symbol | "sqrt" "(" expr ")" | "(" expr ")"
    symbol := H | G | L | N1 | N2 | N3 | A | S | B[rational] | DP[rational]

Numbers are integers or decimals and are kept exactly; a fraction such as
``5/2`` is a division node. Whitespace is ignored. :func:`pretty` prints the
minimal parenthesization, so ``parse_claim(pretty(c)) == c`` for every chain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from .exceptions import (
    ClaimSyntaxError,
    MalformedParameterError,
    MeanParameterError,
    UnknownSymbolError,
)
from .means import MeanKind, MeanTag, evaluate_mean
from .types import FloatArray, Real, Relation


def _terminates(value: Fraction) -> bool:
    d = value.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def _format_number(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    digits = 0
    scaled = value
    while scaled.denominator != 1:
        scaled *= 10
        digits += 1
    whole = str(scaled.numerator).rjust(digits + 1, "0")
    return f"{whole[:-digits]}.{whole[-digits:]}"


@dataclass(frozen=True)
class Num:
    """A non-negative terminating decimal literal."""

    value: Fraction

    def __post_init__(self) -> None:
        value = Fraction(self.value)
        if value < 0 or not _terminates(value):
            raise ValueError(f"{value} is not a terminating decimal literal")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class MeanRef:
    kind: MeanKind


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Sqrt:
    arg: "Node"


Node = Union[Num, MeanRef, BinOp, Pow, Sqrt]


@dataclass(frozen=True)
class Chain:
    """``terms[0] rel[0] terms[1] rel[1] ...``; at least two terms."""

    terms: Tuple[Node, ...]
    relations: Tuple[Relation, ...]

    def __post_init__(self) -> None:
        if len(self.terms) < 2:
            raise ValueError("a claim compares at least two expressions")
        if len(self.relations) != len(self.terms) - 1:
            raise ValueError("need exactly one relation between consecutive terms")

    def comparisons(self) -> Iterator[Tuple[Relation, Node, Node]]:
        for i, rel in enumerate(self.relations):
            yield rel, self.terms[i], self.terms[i + 1]

    def means(self) -> Tuple[MeanKind, ...]:
        """Distinct means referenced by the chain, in first-use order."""
        seen: Dict[MeanKind, None] = {}
        for term in self.terms:
            for kind in _means_in(term):
                seen.setdefault(kind, None)
        return tuple(seen)


def _means_in(node: Node) -> Iterator[MeanKind]:
    if isinstance(node, MeanRef):
        yield node.kind
    elif isinstance(node, BinOp):
        yield from _means_in(node.left)
        yield from _means_in(node.right)
    elif isinstance(node, Pow):
        yield from _means_in(node.base)
    elif isinstance(node, Sqrt):
        yield from _means_in(node.arg)


# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)(?:\s*\[(?P<param>[^\]]*)(?P<close>\]?))?
  | (?P<rel><=|>=)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int
    value: object = None


def _symbol(match: "re.Match[str]", text: str) -> _Token:
    name = match.group("ident")
    pos = match.start()
    param = match.group("param")
    if name == "sqrt":
        if param is not None:
            raise MalformedParameterError("sqrt takes no parameter", position=pos, text=text)
        return _Token("sqrt", name, pos)
    try:
        tag = MeanTag(name)
    except ValueError:
        raise UnknownSymbolError(name, position=pos, text=text) from None
    if param is not None and not match.group("close"):
        raise MalformedParameterError(
            f"unterminated parameter for {name}", position=match.start("param"), text=text
        )
    try:
        kind = MeanKind(tag, param)
    except MeanParameterError as e:
        at = match.start("param") if param is not None else pos
        raise MalformedParameterError(str(e), position=at, text=text) from None
    return _Token("mean", match.group(0), pos, kind)


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ClaimSyntaxError(f"unexpected character {text[pos]!r}", position=pos, text=text)
        if m.lastgroup == "number":
            tokens.append(_Token("number", m.group(0), pos, Fraction(m.group(0))))
        elif m.group("ident") is not None:
            tokens.append(_symbol(m, text))
        elif m.lastgroup in ("rel", "op"):
            tokens.append(_Token(m.group(0), m.group(0), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# Recursive-descent parser


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Optional[_Token] = None) -> ClaimSyntaxError:
        tok = tok or self.current
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return ClaimSyntaxError(f"{message}, found {found}", position=tok.pos, text=self.text)

    def expect(self, kind: str) -> _Token:
        if self.current.kind != kind:
            raise self.error(f"expected {kind!r}")
        return self.advance()

    def chain(self) -> Chain:
        terms = [self.expr()]
        relations: List[Relation] = []
        while self.current.kind in ("<=", ">="):
            relations.append(self.advance().kind)  # type: ignore[arg-type]
            terms.append(self.expr())
        if self.current.kind != "end":
            raise self.error("expected an operator or relation")
        if not relations:
            raise self.error("expected '<=' or '>='")
        return Chain(tuple(terms), tuple(relations))

    def expr(self) -> Node:
        node = self.term()
        while self.current.kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.current.kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.atom()
        while self.current.kind == "^":
            self.advance()
            negative = False
            if self.current.kind == "-":
                self.advance()
                negative = True
            tok = self.current
            if tok.kind != "number" or Fraction(tok.value).denominator != 1:  # type: ignore[arg-type]
                raise self.error("expected an integer exponent")
            self.advance()
            exponent = int(tok.value)  # type: ignore[call-overload]
            node = Pow(node, -exponent if negative else exponent)
        return node

    def atom(self) -> Node:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Num(tok.value)  # type: ignore[arg-type]
        if tok.kind == "mean":
            self.advance()
            return MeanRef(tok.value)  # type: ignore[arg-type]
        if tok.kind == "sqrt":
            self.advance()
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return Sqrt(inner)
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error("expected a number, mean, 'sqrt' or '('")


def parse_claim(text: str) -> Chain:
    """Parse an inequality chain.

    :param text: Claim text, e.g. ``"(A+H)/2 <= sqrt((A^2+H^2)/2)"``.
    :returns: The parsed :class:`Chain`.
    :raises ClaimSyntaxError: With the character position of the problem.
    :raises UnknownSymbolError: For an identifier that is not a mean.
    :raises MalformedParameterError: For a bad ``B[t]`` or ``DP[r]`` parameter.

    Example::

        >>> len(parse_claim("H <= G <= L <= N1").terms)
        4
    """
    return _Parser(text).chain()


def parse_expression(text: str) -> Node:
    """Parse a single expression (no relation)."""
    parser = _Parser(text)
    node = parser.expr()
    if parser.current.kind != "end":
        raise parser.error("unexpected trailing input")
    return node


# Pretty printer

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}
_ATOM = 4


def _precedence(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Pow):
        return 3
    return _ATOM


def _wrap(node: Node, parenthesize: bool) -> str:
    text = pretty(node)
    return f"({text})" if parenthesize else text


def pretty(node: Union[Node, Chain]) -> str:
    """Canonical text of an expression or chain."""
    if isinstance(node, Chain):
        parts = [pretty(node.terms[0])]
        for rel, term in zip(node.relations, node.terms[1:]):
            parts.append(f" {rel} {pretty(term)}")
        return "".join(parts)
    if isinstance(node, Num):
        return _format_number(node.value)
    if isinstance(node, MeanRef):
        return node.kind.symbol
    if isinstance(node, Sqrt):
        return f"sqrt({pretty(node.arg)})"
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _precedence(node.base) < 3)}^{node.exponent}"
    prec = _PRECEDENCE[node.op]
    left = _wrap(node.left, _precedence(node.left) < prec)
    right = _wrap(node.right, _precedence(node.right) <= prec)
    sep = " " if prec == 1 else ""
    return f"{left}{sep}{node.op}{sep}{right}"


# Evaluation

MeanCache = Dict[MeanKind, FloatArray]


def evaluate(node: Node, a: Real, b: Real, cache: Optional[MeanCache] = None) -> FloatArray:
    """Evaluate an expression over broadcastable arrays of pairs.

    Undefined points (a negative square-root argument, ``0/0``) come back as NaN;
    callers decide whether that is a fault. ``cache`` memoizes mean arrays for
    one fixed ``(a, b)`` across calls.
    """
    memo: MeanCache = {} if cache is None else cache

    def walk(n: Node) -> FloatArray:
        if isinstance(n, Num):
            return np.asarray(float(n.value))
        if isinstance(n, MeanRef):
            if n.kind not in memo:
                memo[n.kind] = evaluate_mean(n.kind, a, b)
            return memo[n.kind]
        if isinstance(n, Sqrt):
            arg = walk(n.arg)
            return np.where(arg >= 0.0, np.sqrt(np.abs(arg)), np.nan)
        if isinstance(n, Pow):
            return np.power(walk(n.base), float(n.exponent))
        left, right = walk(n.left), walk(n.right)
        if n.op == "+":
            return left + right
        if n.op == "-":
            return left - right
        if n.op == "*":
            return left * right
        return left / right

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.asarray(walk(node), dtype=float)
