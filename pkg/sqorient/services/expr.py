from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, List

from .errors import ExpressionSyntaxError, NegativeExponent, UnknownIdentifier
from .poly import GF2, ClassPoly, Domain, GeneratorTable, IntegerDomain, ParamPoly

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_NUMBER = re.compile(r"\d+")
_OPERATORS = "+-*^()"


@dataclass(frozen=True)
class _Token:
    kind: str  # "name" | "num" | "op" | "end"
    value: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(_Token("num", m.group(), i))
            i = m.end()
            continue
        m = _NAME.match(text, i)
        if m:
            tokens.append(_Token("name", m.group(), i))
            i = m.end()
            continue
        if ch in _OPERATORS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise ExpressionSyntaxError(f"unexpected character {ch!r}", i, text)
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    """
    Recursive descent over
        expr   := ['-'] term (('+' | '-') term)*
        term   := factor ('*' factor)*
        factor := atom ('^' uint)?
        atom   := identifier | uint | '(' expr ')'
    """

    def __init__(self, text: str, gens: GeneratorTable, domain: Domain):
        self.text = text
        self.gens = gens
        self.domain = domain
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self) -> _Token:
        return self.tokens[self.i]

    def _take(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def _at(self, op: str) -> bool:
        tok = self._peek()
        return tok.kind == "op" and tok.value == op

    def _fail(self, tok: _Token, what: str = "") -> ExpressionSyntaxError:
        if tok.kind == "end":
            return ExpressionSyntaxError("unexpected end of expression", tok.pos, self.text)
        return ExpressionSyntaxError(what or f"unexpected {tok.value!r}", tok.pos, self.text)

    def parse(self) -> ClassPoly:
        value = self._expr()
        tok = self._peek()
        if tok.kind != "end":
            raise self._fail(tok)
        return value

    def _expr(self) -> ClassPoly:
        negate = False
        if self._at("-"):
            self._take()
            negate = True
        value = self._term()
        if negate:
            value = -value
        while self._at("+") or self._at("-"):
            op = self._take().value
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> ClassPoly:
        value = self._factor()
        while self._at("*"):
            self._take()
            value = value * self._factor()
        return value

    def _factor(self) -> ClassPoly:
        base = self._atom()
        if self._at("^"):
            self._take()
            tok = self._peek()
            if tok.kind == "op" and tok.value == "-":
                raise NegativeExponent(tok.pos, self.text)
            if tok.kind != "num":
                raise self._fail(tok, "expected a non-negative integer exponent")
            self._take()
            base = base ** int(tok.value)
        return base

    def _atom(self) -> ClassPoly:
        tok = self._take()
        if tok.kind == "num":
            return ClassPoly.constant(self.gens, self.domain, self.domain.from_int(int(tok.value)))
        if tok.kind == "name":
            if tok.value in self.gens.names:
                return ClassPoly.generator(self.gens, self.domain, tok.value)
            param = self.domain.parameter(tok.value)
            if param is not None:
                return ClassPoly.constant(self.gens, self.domain, param)
            raise UnknownIdentifier(tok.value, tok.pos, self.text)
        if tok.kind == "op" and tok.value == "(":
            value = self._expr()
            if not self._at(")"):
                raise self._fail(self._peek(), "expected ')'")
            self._take()
            return value
        raise self._fail(tok)


def parse_expr(text: str, gens: GeneratorTable, domain: Domain = GF2) -> ClassPoly:
    """
    Parse an expression into a canonical class. Identifiers resolve to
    generators first, then to the domain's parameters.
    """
    return _Parser(text, gens, domain).parse()


def render(p: ClassPoly) -> str:
    """
    Deterministic text form, grevlex ascending; parse_expr(render(p)) == p.
    """
    if p.is_zero():
        return "0"
    dom = p.domain
    unit = p.gens.unit
    out = ""
    for i, (m, c) in enumerate(p.terms()):
        negative = isinstance(dom, IntegerDomain) and c < 0
        if negative:
            c = -c
        mono = p.gens.render_monomial(m)
        if dom.is_one(c):
            body = mono
        else:
            text, compound = dom.render(c)
            if m == unit:
                body = f"({text})" if compound and len(p) > 1 else text
            else:
                body = f"({text}) * {mono}" if compound else f"{text} * {mono}"
        if i == 0:
            out = f"-{body}" if negative else body
        else:
            out += f" - {body}" if negative else f" + {body}"
    return out


def render_coefficient(c: Any) -> str:
    """
    Text form of one coordinate: 0/1, an integer, or a parameter polynomial.
    """
    if isinstance(c, ParamPoly):
        return c.render()
    return str(c)
