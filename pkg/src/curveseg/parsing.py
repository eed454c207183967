"""Text form of curve equations: parser and canonical printer.

Grammar: signed terms, each a ``*``-separated product of rational constants
(``3``, ``1/2``) and variable powers (``x``, ``y^3``).  Whitespace is
insignificant.  Example: ``y^2 - x^3 - x^2``.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import BivarPoly
from .errors import ParseError

_TOKEN_CHARS = {"+", "-", "*", "/", "^", "x", "y"}


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(("int", int(text[start:i]), start))
            continue
        if ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i, "term, sign or '*'")
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def error(self, message, expected):
        tok = self.peek()
        at = tok[2] if tok else len(self.text)
        raise ParseError(message, at, expected)

    def parse(self):
        terms = {}
        sign = 1
        tok = self.peek()
        if tok and tok[0] in "+-":
            self.take()
            sign = -1 if tok[0] == "-" else 1
        if self.peek() is None:
            self.error("empty polynomial", "a term")
        while True:
            exponents, coeff = self.term()
            key = exponents
            terms[key] = terms.get(key, Fraction(0)) + sign * coeff
            tok = self.peek()
            if tok is None:
                break
            if tok[0] in "+-":
                self.take()
                sign = -1 if tok[0] == "-" else 1
                continue
            self.error(f"unexpected {tok[0]!r}", "'+', '-' or end of input")
        return BivarPoly.from_terms(terms)

    def term(self):
        coeff = Fraction(1)
        xe = ye = 0
        while True:
            tok = self.peek()
            if tok is None or tok[0] not in ("int", "x", "y"):
                self.error("missing factor", "a number, 'x' or 'y'")
            if tok[0] == "int":
                self.take()
                value = Fraction(tok[1])
                nxt = self.peek()
                if nxt and nxt[0] == "/":
                    self.take()
                    den = self.peek()
                    if den is None or den[0] != "int":
                        self.error("missing denominator", "a positive integer")
                    self.take()
                    if den[1] == 0:
                        raise ParseError("zero denominator", den[2])
                    value /= den[1]
                coeff *= value
            else:
                self.take()
                exp = 1
                nxt = self.peek()
                if nxt and nxt[0] == "^":
                    self.take()
                    e = self.peek()
                    if e is None or e[0] != "int":
                        self.error("missing exponent", "a non-negative integer")
                    self.take()
                    exp = e[1]
                if tok[0] == "x":
                    xe += exp
                else:
                    ye += exp
            nxt = self.peek()
            if nxt and nxt[0] == "*":
                self.take()
                continue
            return (xe, ye), coeff


def parse_polynomial(text):
    """Parse the term grammar into a bivariate polynomial with exact coefficients."""
    return _Parser(text).parse()


def _format_term(i, j, c):
    parts = []
    mag = abs(c)
    if mag != 1 or (i == 0 and j == 0):
        parts.append(str(mag))
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def canonical_text(g):
    """Deterministic text form; parsing it returns an equal polynomial."""
    if g.is_zero:
        return "0"
    terms = sorted(g.terms(), key=lambda t: (t[0][0] + t[0][1], t[0][0]), reverse=True)
    out = []
    for (i, j), c in terms:
        if not out:
            prefix = "-" if c < 0 else ""
        else:
            prefix = " - " if c < 0 else " + "
        out.append(prefix + _format_term(i, j, c))
    return "".join(out)
