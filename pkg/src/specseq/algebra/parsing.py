"""Text form of polynomials.

Accepted grammar (whitespace ignored)::

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' uint)?
    atom   := uint | 'i' | identifier | '(' expr ')'

Division is only allowed by expressions free of STATE variables, so
``3/2*x1^2`` and ``x/(A - B)`` parse while ``1/x`` is rejected.  The printer
emits exactly this language, so ``parse(format(p)) == p``.
"""

from __future__ import annotations

import re

from ..errors import DivisionByZero, NotAStateVariable, ParseError, UnknownVariable
from .polynomial import Polynomial, VariableTable
from .scalars import Scalar

__all__ = ["parse_polynomial", "parse_scalar", "format_polynomial", "format_scalar"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(0).strip() == "":
            pos = m.end()
            continue
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text, table):
        self.tokens = _tokenize(text)
        self.k = 0
        self.table = table

    def peek(self):
        return self.tokens[self.k]

    def take(self, kind=None):
        tok = self.tokens[self.k]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.k += 1
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expr(self):
        sign = None
        if self.peek()[0] in ("+", "-"):
            sign = self.take()[0]
        value = self.term()
        if sign == "-":
            value = -value
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.degree() > 0:
                    raise NotAStateVariable(f"division by an expression in state variables at position {pos}")
                if rhs.is_zero():
                    raise DivisionByZero(f"division by zero at position {pos}")
                value = value / rhs
        return value

    def factor(self):
        value = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            value = value ** int(tok[1])
        return value

    def atom(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.take()
            return Polynomial.constant(self.table, int(text))
        if kind == "id":
            self.take()
            if text == "i":
                return Polynomial.constant(self.table, Scalar.imag_unit(self.table.space))
            try:
                return Polynomial.variable(self.table, text)
            except UnknownVariable:
                raise UnknownVariable(f"unknown variable {text!r} at position {pos}") from None
        if kind == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        what = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {what}", pos)


def parse_polynomial(text: str, table: VariableTable) -> Polynomial:
    """Parse ``text`` over ``table``.

    >>> t = VariableTable(["x1", "x2"])
    >>> str(parse_polynomial("3/2*x1^2*x2 - x2", t))
    '3/2*x1^2*x2 - x2'
    """
    if not isinstance(text, str):
        text = str(text)
    return _Parser(text, table).parse()


def parse_scalar(text: str, space_or_table) -> Scalar:
    """Parse a STATE-free expression into a Scalar."""
    if isinstance(space_or_table, VariableTable):
        table = space_or_table.with_state(())
    else:
        table = VariableTable((), space=space_or_table)
    poly = parse_polynomial(text, table)
    return poly.coefficient(())


def format_scalar(c: Scalar) -> str:
    return str(c)


def _format_mono(names, e):
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text, terms in descending graded-lex order."""
    if not p.terms:
        return "0"
    names = p.table.state
    pieces = []
    for e, c in p.sorted_terms(descending=True):
        mon = _format_mono(names, e)
        if c.is_rational():
            v = c.to_fraction()
            neg = v < 0
            mag = -v if neg else v
            if not mon:
                body = str(mag)
            elif mag == 1:
                body = mon
            else:
                body = f"{mag}*{mon}"
        else:
            neg = False
            s = str(c)
            if len(c.num) == 1 and c._den_is_one():
                # single parametric term such as -6*L or 2*i*a
                if s.startswith("-"):
                    neg, s = True, s[1:]
                body = f"{s}*{mon}" if mon else s
            else:
                body = f"({s})*{mon}" if mon else f"({s})"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f"{'-' if neg else '+'} {body}")
    return " ".join(pieces)
