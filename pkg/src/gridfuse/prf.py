"""Primitive recursive function expressions.

Expressions are immutable trees built from ``Zero``, ``Succ`` and ``Proj``
with ``Compose`` and ``PrimRec``.  ``validate`` checks arities statically,
``evaluate`` computes exact natural-number results.  Primitive recursion is
executed as a loop over the recursion variable, so call depth is bounded
by the expression tree, never by the argument values.

Projection indices are 1-based: ``Proj(1, 3)`` returns the first of three
arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from operator import itemgetter
from typing import Callable, Sequence, Tuple, Union

from .errors import ArityMismatch, InputError, ProjectionOutOfRange, UnknownName

Fn = Callable[[tuple], int]


@dataclass(frozen=True)
class Zero:
    """The 0-ary constant 0."""

    def __str__(self) -> str:
        return "zero"

    @cached_property
    def _fn(self) -> Fn:
        return lambda args: 0


@dataclass(frozen=True)
class Succ:
    def __str__(self) -> str:
        return "succ"

    @cached_property
    def _fn(self) -> Fn:
        return lambda args: args[0] + 1


@dataclass(frozen=True)
class Proj:
    i: int
    n: int

    def __str__(self) -> str:
        return f"(proj {self.i} {self.n})"

    @cached_property
    def _fn(self) -> Fn:
        return itemgetter(self.i - 1)


@dataclass(frozen=True)
class Compose:
    """``g(h1(xs), ..., hm(xs))``."""

    g: "PrfExpr"
    hs: Tuple["PrfExpr", ...]

    def __init__(self, g: "PrfExpr", hs: Sequence["PrfExpr"]):
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "hs", tuple(hs))

    def __str__(self) -> str:
        inner = " ".join(str(h) for h in self.hs)
        return f"(compose {self.g} ({inner}))"

    @cached_property
    def _fn(self) -> Fn:
        g = self.g._fn
        hs = [h._fn for h in self.hs]
        if len(hs) == 1:
            (h,) = hs
            return lambda args: g((h(args),))
        if len(hs) == 2:
            h1, h2 = hs
            return lambda args: g((h1(args), h2(args)))
        return lambda args: g(tuple(h(args) for h in hs))


@dataclass(frozen=True)
class PrimRec:
    """``f(xs, 0) = g(xs)``; ``f(xs, y + 1) = h(xs, y, f(xs, y))``."""

    g: "PrfExpr"
    h: "PrfExpr"

    def __str__(self) -> str:
        return f"(primrec {self.g} {self.h})"

    @cached_property
    def _fn(self) -> Fn:
        g = self.g._fn
        h = self.h._fn

        def f(args: tuple) -> int:
            xs = args[:-1]
            acc = g(xs)
            for k in range(args[-1]):
                acc = h(xs + (k, acc))
            return acc

        return f


PrfExpr = Union[Zero, Succ, Proj, Compose, PrimRec]


def validate(expr: PrfExpr) -> int:
    """Return the arity of ``expr`` or raise if any constructor is ill-formed."""
    if isinstance(expr, Zero):
        return 0
    if isinstance(expr, Succ):
        return 1
    if isinstance(expr, Proj):
        if expr.n < 1 or not 1 <= expr.i <= expr.n:
            raise ProjectionOutOfRange(f"{expr}: need 1 <= i <= n and n >= 1")
        return expr.n
    if isinstance(expr, Compose):
        m = validate(expr.g)
        if len(expr.hs) != m:
            raise ArityMismatch(str(expr.g), m, len(expr.hs))
        if m == 0:
            raise ArityMismatch(f"{expr}: composition needs an inner function", 1, 0)
        arities = [validate(h) for h in expr.hs]
        n = arities[0]
        for h, a in zip(expr.hs, arities):
            if a != n:
                raise ArityMismatch(str(h), n, a)
        return n
    if isinstance(expr, PrimRec):
        n = validate(expr.g)
        a = validate(expr.h)
        if a != n + 2:
            raise ArityMismatch(str(expr.h), n + 2, a)
        return n + 1
    raise TypeError(f"not a PrfExpr: {expr!r}")


def evaluate(expr: PrfExpr, args: Sequence[int]) -> int:
    arity = validate(expr)
    if len(args) != arity:
        raise ArityMismatch(str(expr), arity, len(args))
    for a in args:
        if isinstance(a, bool) or not isinstance(a, int) or a < 0:
            raise InputError(f"arguments must be natural numbers, got {a!r}")
    return expr._fn(tuple(args))


# Building blocks.  Constants of positive arity are made by recursion so
# nothing beyond the five constructors is needed.
ZERO = Zero()
SUCC = Succ()
ONE0 = Compose(SUCC, [ZERO])
ZERO1 = PrimRec(ZERO, Proj(2, 2))
PRED = PrimRec(ZERO, Proj(1, 2))

ADD = PrimRec(Proj(1, 1), Compose(SUCC, [Proj(3, 3)]))
MULT = PrimRec(ZERO1, Compose(ADD, [Proj(3, 3), Proj(1, 3)]))
EXP = PrimRec(Compose(SUCC, [ZERO1]), Compose(MULT, [Proj(3, 3), Proj(1, 3)]))
FACTORIAL = PrimRec(ONE0, Compose(MULT, [Proj(2, 2), Compose(SUCC, [Proj(1, 2)])]))
PROPER_SUB = PrimRec(Proj(1, 1), Compose(PRED, [Proj(3, 3)]))
MIN2 = Compose(PROPER_SUB, [Proj(1, 2), Compose(PROPER_SUB, [Proj(1, 2), Proj(2, 2)])])
MAX2 = Compose(ADD, [Proj(2, 2), Compose(PROPER_SUB, [Proj(1, 2), Proj(2, 2)])])
ABS_DIFF = Compose(
    ADD,
    [
        Compose(PROPER_SUB, [Proj(1, 2), Proj(2, 2)]),
        Compose(PROPER_SUB, [Proj(2, 2), Proj(1, 2)]),
    ],
)

_CATALOG = {
    "add": ADD,
    "mult": MULT,
    "exp": EXP,
    "factorial": FACTORIAL,
    "proper_sub": PROPER_SUB,
    "min2": MIN2,
    "max2": MAX2,
    "abs_diff": ABS_DIFF,
}

CATALOG_NAMES = tuple(_CATALOG)


def catalog(name: str) -> PrfExpr:
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownName(f"no catalog function named {name!r}") from None


def constant(k: int, arity: int) -> PrfExpr:
    """The constant ``k`` as a function of ``arity`` arguments."""
    base: PrfExpr = ZERO if arity == 0 else Compose(ZERO1, [Proj(1, arity)])
    for _ in range(k):
        base = Compose(SUCC, [base])
    return base


def fold_arity(binary: PrfExpr, n: int) -> PrfExpr:
    """Extend a binary function to ``n`` arguments by right-nested composition.

    ``fold_arity(MIN2, 3)`` computes ``min2(x1, min2(x2, x3))``.
    """
    if validate(binary) != 2:
        raise ArityMismatch(str(binary), 2, validate(binary))
    if n < 1:
        raise InputError("n must be at least 1")
    acc: PrfExpr = Proj(n, n)
    for i in range(n - 1, 0, -1):
        acc = Compose(binary, [Proj(i, n), acc])
    return acc
