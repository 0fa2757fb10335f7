import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridfuse.errors import ArityMismatch, ParseError, ProjectionOutOfRange, UnknownName
from gridfuse.prf import (
    ADD,
    CATALOG_NAMES,
    SUCC,
    ZERO,
    Compose,
    PrimRec,
    Proj,
    catalog,
    constant,
    evaluate,
    fold_arity,
    validate,
)
from gridfuse.prf_syntax import dumps, parse

NATIVE = {
    "add": lambda a, b: a + b,
    "mult": lambda a, b: a * b,
    "exp": lambda a, b: a**b,
    "proper_sub": lambda a, b: a - b if a >= b else 0,
    "min2": min,
    "max2": max,
    "abs_diff": lambda a, b: abs(a - b),
}


def test_arity_examples():
    assert validate(Proj(1, 3)) == 3
    assert validate(Compose(SUCC, [Proj(2, 2)])) == 2
    with pytest.raises(ArityMismatch):
        validate(Compose(SUCC, [Proj(1, 2), Proj(2, 2)]))


def test_projection_bounds():
    with pytest.raises(ProjectionOutOfRange):
        validate(Proj(0, 2))
    with pytest.raises(ProjectionOutOfRange):
        validate(Proj(3, 2))


def test_primrec_arity_must_line_up():
    with pytest.raises(ArityMismatch):
        validate(PrimRec(Proj(1, 1), Proj(1, 2)))


def test_eval_examples():
    assert evaluate(SUCC, [0]) == 1
    assert evaluate(ADD, [2, 3]) == 5
    assert evaluate(catalog("factorial"), [5]) == 120
    assert evaluate(catalog("proper_sub"), [3, 5]) == 0
    assert evaluate(catalog("proper_sub"), [5, 3]) == 2
    assert evaluate(catalog("mult"), [3, 4]) == 12
    assert evaluate(catalog("max2"), [7, 7]) == 7


def test_eval_rejects_bad_arguments():
    with pytest.raises(ArityMismatch):
        evaluate(ADD, [1])
    with pytest.raises(ValueError):
        evaluate(ADD, [1, -1])


def test_unknown_catalog_name():
    with pytest.raises(UnknownName):
        catalog("nope")


@pytest.mark.parametrize("name", sorted(NATIVE))
def test_catalog_matches_native_small_grid(name):
    f = catalog(name)
    hi = 6 if name == "exp" else 12
    for a in range(hi):
        for b in range(hi):
            assert evaluate(f, [a, b]) == NATIVE[name](a, b)


def test_factorial_matches_loop():
    for n in range(9):
        assert evaluate(catalog("factorial"), [n]) == math.factorial(n)


def test_constant_and_fold_arity():
    assert evaluate(constant(4, 2), [9, 9]) == 4
    assert evaluate(constant(3, 0), []) == 3
    assert evaluate(fold_arity(catalog("min2"), 3), [5, 2, 7]) == 2
    assert evaluate(fold_arity(catalog("add"), 1), [5]) == 5


def test_values_are_unbounded_ints():
    assert evaluate(catalog("exp"), [2, 20]) == 2**20
    assert evaluate(catalog("factorial"), [10]) == math.factorial(10)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_print_parse_round_trip(name):
    f = catalog(name)
    assert parse(dumps(f)) == f
    assert parse(name) == f


def test_parse_errors():
    for text in ["", "(proj 1)", "(compose succ)", "(primrec zero", "banana", "(proj a 2)"]:
        with pytest.raises((ParseError, UnknownName)):
            parse(text)


def test_parse_source_text():
    expr = parse("(primrec (proj 1 1) (compose succ ((proj 3 3))))")
    assert expr == ADD


@st.composite
def prf_exprs(draw, arity, depth=3):
    """Random well-formed expressions of a given arity."""
    choices = ["proj", "const"] + (["compose", "primrec"] if depth > 0 else [])
    kind = draw(st.sampled_from(choices))
    if kind == "proj" and arity >= 1:
        return Proj(draw(st.integers(1, arity)), arity)
    if kind == "compose":
        m = draw(st.integers(1, 2))
        g = draw(prf_exprs(m, depth - 1))
        hs = [draw(prf_exprs(arity, depth - 1)) for _ in range(m)]
        return Compose(g, hs)
    if kind == "primrec" and arity >= 1:
        g = draw(prf_exprs(arity - 1, depth - 1))
        h = draw(prf_exprs(arity + 1, depth - 1))
        return PrimRec(g, h)
    return constant(draw(st.integers(0, 3)), arity)


@given(st.integers(0, 3).flatmap(lambda k: st.tuples(st.just(k), prf_exprs(k))))
def test_random_expressions_round_trip(pair):
    arity, expr = pair
    assert validate(expr) == arity
    assert parse(dumps(expr)) == expr


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.integers(1, n), st.lists(st.integers(0, 50), min_size=n, max_size=n))))
def test_projection_picks_argument(case):
    i, args = case
    assert evaluate(Proj(i, len(args)), args) == args[i - 1]


@given(st.integers(0, 2).flatmap(lambda k: st.tuples(prf_exprs(k, 1), prf_exprs(k + 2, 1), st.lists(st.integers(0, 5), min_size=k, max_size=k))))
def test_primrec_base_case(case):
    g, h, xs = case
    assert evaluate(PrimRec(g, h), [*xs, 0]) == evaluate(g, xs)


@given(st.integers(0, 2).flatmap(lambda k: st.tuples(prf_exprs(k, 1), prf_exprs(k + 2, 1), st.lists(st.integers(0, 5), min_size=k, max_size=k), st.integers(0, 4))))
def test_primrec_step_law(case):
    g, h, xs, y = case
    f = PrimRec(g, h)
    assert evaluate(f, [*xs, y + 1]) == evaluate(h, [*xs, y, evaluate(f, [*xs, y])])


def test_zero_has_arity_zero():
    assert validate(ZERO) == 0
    assert evaluate(ZERO, []) == 0
