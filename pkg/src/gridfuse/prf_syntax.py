"""S-expression syntax for PRF expressions.

Grammar::

    expr := "zero" | "succ"
          | "(" "proj" INT INT ")"
          | "(" "compose" expr "(" expr+ ")" ")"
          | "(" "primrec" expr expr ")"
          | NAME                      # catalog entry, e.g. "add"

``str(expr)`` prints the canonical form; ``parse(str(e)) == e`` for every
expression.  Catalog names are expanded on parsing, so they do not
round-trip by name.
"""

from __future__ import annotations

import re
from typing import List

from .errors import ParseError, UnknownName
from .prf import SUCC, ZERO, Compose, PrfExpr, PrimRec, Proj, catalog

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def tokenize(text: str) -> List[str]:
    return _TOKEN.findall(text)


def parse(text: str) -> PrfExpr:
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    expr, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise ParseError(f"trailing input at token {pos}: {tokens[pos]!r}")
    return expr


def _expect(tokens: List[str], pos: int, tok: str) -> int:
    if pos >= len(tokens) or tokens[pos] != tok:
        got = tokens[pos] if pos < len(tokens) else "end of input"
        raise ParseError(f"expected {tok!r} at token {pos}, got {got!r}")
    return pos + 1


def _int(tokens: List[str], pos: int) -> int:
    if pos >= len(tokens) or not tokens[pos].isdigit():
        got = tokens[pos] if pos < len(tokens) else "end of input"
        raise ParseError(f"expected integer at token {pos}, got {got!r}")
    return int(tokens[pos])


def _parse(tokens: List[str], pos: int):
    if pos >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[pos]
    if tok == ")":
        raise ParseError(f"unexpected ')' at token {pos}")
    if tok != "(":
        if tok == "zero":
            return ZERO, pos + 1
        if tok == "succ":
            return SUCC, pos + 1
        try:
            return catalog(tok), pos + 1
        except UnknownName:
            raise ParseError(f"unknown atom {tok!r}") from None

    if pos + 1 >= len(tokens):
        raise ParseError("unexpected end of input")
    head = tokens[pos + 1]
    pos += 2
    if head == "proj":
        i = _int(tokens, pos)
        n = _int(tokens, pos + 1)
        return Proj(i, n), _expect(tokens, pos + 2, ")")
    if head == "compose":
        g, pos = _parse(tokens, pos)
        pos = _expect(tokens, pos, "(")
        hs = []
        while pos < len(tokens) and tokens[pos] != ")":
            h, pos = _parse(tokens, pos)
            hs.append(h)
        pos = _expect(tokens, pos, ")")
        return Compose(g, hs), _expect(tokens, pos, ")")
    if head == "primrec":
        g, pos = _parse(tokens, pos)
        h, pos = _parse(tokens, pos)
        return PrimRec(g, h), _expect(tokens, pos, ")")
    raise ParseError(f"unknown form {head!r}")


def dumps(expr: PrfExpr) -> str:
    return str(expr)
