"""Binary fusion combiners executed by two-register nodes.

A node never sees more than its own partial and one incoming value, so
every fusion function is expressed as a binary ``combine`` over partial
states.  Raw readings are turned into partial states by ``pre_map`` (which
also receives the reading's index, for per-node weights) and the final
state is turned back into a reading by ``post_map``.

Readings are exact ``Fraction`` values: row-wise and column-wise folds of
an associative-commutative spec must agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    ArityMismatch,
    EmptyInput,
    InputError,
    MissingWeights,
    NonIntegerReading,
    UnknownName,
)
from .prf import PrfExpr, evaluate, validate

Reading = Fraction
State = Any  # a Reading, or a tuple of Readings for pair-valued folds


def as_reading(value: Any) -> Reading:
    """Coerce ints, rationals, numeric strings ("3/2", "0.1") and floats.

    Floats are read through their shortest decimal repr, so ``0.1`` becomes
    exactly 1/10 rather than the nearest binary double.
    """
    if isinstance(value, bool):
        raise InputError(f"not a reading: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputError(f"reading must be finite, got {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational number: {value!r}") from None
    raise InputError(f"not a reading: {value!r}")


def _identity_map(index: int, value: Reading) -> State:
    return value


def _identity_post(state: State) -> Reading:
    return state


@dataclass(frozen=True)
class FusionSpec:
    name: str
    combine: Callable[[State, State], State]
    comparison_cost: int = 1
    identity: Optional[Reading] = None
    weights: Optional[Tuple[Reading, ...]] = None
    pre_map: Callable[[int, Reading], State] = _identity_map
    post_map: Callable[[State], Reading] = _identity_post
    associative: bool = True
    commutative: bool = True
    # the PRF this spec wraps, if any; kept for reporting
    prf: Optional[PrfExpr] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if isinstance(self.comparison_cost, bool) or not isinstance(self.comparison_cost, int):
            raise InputError("comparison_cost must be an integer")
        if self.comparison_cost < 1:
            raise InputError(f"comparison_cost must be >= 1, got {self.comparison_cost}")

    @property
    def is_ac(self) -> bool:
        return self.associative and self.commutative

    def lift(self, index: int, reading: Reading) -> State:
        return self.pre_map(index, reading)

    def finish(self, state: State) -> Reading:
        return self.post_map(state)

    def with_cost(self, cost: int) -> "FusionSpec":
        return replace(self, comparison_cost=cost)

    def describe(self) -> dict:
        out: dict = {"name": self.name, "comparison_cost": self.comparison_cost}
        if self.weights is not None:
            out["weights"] = [str(w) for w in self.weights]
        if self.prf is not None:
            out["prf"] = str(self.prf)
        return out


class FoldResult(NamedTuple):
    value: Reading
    comparisons: int


def fold(spec: FusionSpec, readings: Sequence[Any]) -> FoldResult:
    """Left-fold ``spec`` over ``readings``; index ``i`` feeds ``pre_map``."""
    values = [as_reading(r) for r in readings]
    if not values:
        if spec.identity is None:
            raise EmptyInput(f"{spec.name}: no readings and no identity element")
        return FoldResult(spec.identity, 0)
    acc = spec.lift(0, values[0])
    for i, v in enumerate(values[1:], start=1):
        acc = spec.combine(acc, spec.lift(i, v))
    return FoldResult(spec.finish(acc), (len(values) - 1) * spec.comparison_cost)


def _pair_add(a: Tuple[Reading, Reading], b: Tuple[Reading, Reading]) -> Tuple[Reading, Reading]:
    return (a[0] + b[0], a[1] + b[1])


def _ratio(state: Tuple[Reading, Reading]) -> Reading:
    if state[1] == 0:
        raise InputError("total weight is zero")
    return state[0] / state[1]


def _weight_lookup(name: str, weights: Tuple[Reading, ...]):
    def w(i: int) -> Reading:
        if i >= len(weights):
            raise MissingWeights(f"{name}: no weight for reading index {i} ({len(weights)} given)")
        return weights[i]

    return w


def _add(a: Reading, b: Reading) -> Reading:
    return a + b


BUILTIN_NAMES = (
    "max",
    "min",
    "sum",
    "count",
    "mean",
    "weighted_mean",
    "weighted_energy",
    "abs_max",
)


def builtin(name: str, weights: Optional[Sequence[Any]] = None, cost: int = 1) -> FusionSpec:
    """Return a named fusion spec.

    Every builtin counts one comparison per combine application unless
    ``cost`` overrides it.  ``mean`` and ``weighted_mean`` fold a
    (sum, count) pair which is held as a single composite register value.
    """
    ws = tuple(as_reading(w) for w in weights) if weights is not None else None
    if name == "max":
        return FusionSpec(name, max, cost)
    if name == "min":
        return FusionSpec(name, min, cost)
    if name == "sum":
        return FusionSpec(name, _add, cost, identity=Fraction(0))
    if name == "count":
        return FusionSpec(name, _add, cost, identity=Fraction(0), pre_map=lambda i, v: Fraction(1))
    if name == "mean":
        return FusionSpec(
            name, _pair_add, cost, pre_map=lambda i, v: (v, Fraction(1)), post_map=_ratio
        )
    if name == "abs_max":
        return FusionSpec(name, max, cost, pre_map=lambda i, v: abs(v))
    if name in ("weighted_mean", "weighted_energy"):
        if ws is None:
            raise MissingWeights(f"{name} needs a weight vector")
        if any(w < 0 for w in ws):
            raise InputError(f"{name}: weights must be non-negative")
        w = _weight_lookup(name, ws)
        if name == "weighted_mean":
            return FusionSpec(
                name,
                _pair_add,
                cost,
                weights=ws,
                pre_map=lambda i, v: (w(i) * v, w(i)),
                post_map=_ratio,
            )
        return FusionSpec(
            name, _add, cost, identity=Fraction(0), weights=ws, pre_map=lambda i, v: w(i) * v * v
        )
    raise UnknownName(f"no builtin fusion function named {name!r}")


def _as_nat(v: Reading) -> int:
    if not isinstance(v, Fraction) or v.denominator != 1 or v < 0:
        raise NonIntegerReading(f"PRF combiners need natural-number readings, got {v}")
    return int(v)


def from_prf(
    expr: PrfExpr,
    name: Optional[str] = None,
    *,
    associative: bool = True,
    commutative: bool = True,
    cost: int = 1,
) -> FusionSpec:
    """Wrap a binary PRF as a combiner over natural-number readings.

    The algebraic flags are the caller's claim; detection relies on them.
    """
    arity = validate(expr)
    if arity != 2:
        raise ArityMismatch(str(expr), 2, arity)

    def combine(a: Reading, b: Reading) -> Reading:
        return Fraction(evaluate(expr, (_as_nat(a), _as_nat(b))))

    def pre(i: int, v: Reading) -> Reading:
        _as_nat(v)
        return v

    return FusionSpec(
        name or f"prf:{expr}",
        combine,
        cost,
        pre_map=pre,
        associative=associative,
        commutative=commutative,
        prf=expr,
    )
