"""Recursive-descent parser for polynomial expressions with exact rational literals.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := ('+' | '-')* factor ('*' factor)*
    factor := base ('^' uint)?
    base   := rational | var | '(' expr ')'

A rational is ``p`` or ``p/q`` with no decimals.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from ..exact_arith import HomPoly3, UniPoly

PLANE_VARS = ("x0", "x1", "x2")
LINE_VARS = ("x",)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")

# sparse polynomial: {exponent tuple: Fraction}
Sparse = dict


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace remains
            break
        start = m.start(m.lastindex)
        if m.group(1):
            if "." in text[m.end():m.end() + 1]:
                raise ParseError("decimal literals are not allowed", m.end())
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("var", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.vars = tuple(variables)
        self.nv = len(self.vars)
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> Sparse:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        out = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self) -> Sparse:
        acc = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            sign = self.take()[1]
            rhs = self.term()
            acc = _add(acc, rhs if sign == "+" else _scale(rhs, -1))
        return acc

    def term(self) -> Sparse:
        neg = False
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            neg ^= self.take()[1] == "-"
        acc = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            acc = _mul(acc, self.factor())
        return _scale(acc, -1) if neg else acc

    def factor(self) -> Sparse:
        base = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a nonnegative integer")
            self.take()
            n = int(tok[1])
            out = {(0,) * self.nv: Fraction(1)}
            for _ in range(n):
                out = _mul(out, base)
            return out
        return base

    def base(self) -> Sparse:
        tok = self.peek()
        kind, val, _ = tok
        if kind == "num":
            self.take()
            num, _, den = val.partition("/")
            if den and int(den) == 0:
                self.fail("zero denominator", tok)
            c = Fraction(int(num), int(den) if den else 1)
            return {(0,) * self.nv: c} if c else {}
        if kind == "var":
            if val not in self.vars:
                self.fail(f"undeclared variable {val!r}", tok)
            self.take()
            e = [0] * self.nv
            e[self.vars.index(val)] = 1
            return {tuple(e): Fraction(1)}
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        if kind == "end":
            # point at the dangling operator rather than past the end
            prev = self.toks[self.k - 1] if self.k else tok
            self.fail(f"unexpected end of input after {prev[1]!r}", prev)
        self.fail(f"unexpected {val!r}", tok)


def _add(a: Sparse, b: Sparse) -> Sparse:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def _scale(a: Sparse, s) -> Sparse:
    return {e: c * s for e, c in a.items()}


def _mul(a: Sparse, b: Sparse) -> Sparse:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c}


def parse_sparse(text: str, variables: Sequence[str]) -> Sparse:
    if not isinstance(text, str):
        raise ParseError("expression must be a string", 0)
    return _Parser(text, variables).parse()


def parse_poly(text, variables: Sequence[str] = PLANE_VARS, *, homogeneous: bool = True):
    """Parse into a HomPoly3 (three plane variables) or a UniPoly (one variable)."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        text = str(text)
    variables = tuple(variables)
    sparse = parse_sparse(text, variables)
    if len(variables) == 1:
        if not sparse:
            return UniPoly()
        deg = max(e[0] for e in sparse)
        coeffs = [Fraction(0)] * (deg + 1)
        for (k,), c in sparse.items():
            coeffs[k] = c
        return UniPoly(coeffs)
    if len(variables) != 3:
        raise ValueError("variable set must have one or three names")
    if homogeneous and len({sum(e) for e in sparse}) > 1:
        raise ParseError("polynomial is not homogeneous", 0, text)
    return HomPoly3(sparse)
