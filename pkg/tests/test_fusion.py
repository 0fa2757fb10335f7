from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridfuse.errors import ArityMismatch, EmptyInput, MissingWeights, NonIntegerReading, UnknownName
from gridfuse.fusion import BUILTIN_NAMES, as_reading, builtin, fold, from_prf
from gridfuse.prf import SUCC, catalog

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)


def test_fold_examples():
    assert fold(builtin("max"), [3, 9, 2, 9]).value == 9
    assert fold(builtin("weighted_energy", weights=[1, 2]), [3, 2]).value == 17
    assert fold(builtin("mean"), [5]).value == 5
    assert fold(builtin("max"), [1, 2, 3]) == (3, 2)
    assert fold(builtin("sum"), []).value == 0


def test_cost_multiplies_comparisons():
    spec = builtin("max", cost=3)
    assert fold(spec, [1, 2, 3, 4, 5]).comparisons == 12
    assert builtin("sum").with_cost(5).comparison_cost == 5


def test_empty_without_identity():
    with pytest.raises(EmptyInput):
        fold(builtin("max"), [])


def test_weights_required():
    with pytest.raises(MissingWeights):
        builtin("weighted_mean")


def test_unknown_builtin():
    with pytest.raises(UnknownName):
        builtin("median")


def test_cost_must_be_positive():
    with pytest.raises(ValueError):
        builtin("max", cost=0)


def test_weighted_mean_and_count():
    assert fold(builtin("weighted_mean", weights=[1, 3]), [2, 6]).value == 5
    assert fold(builtin("count"), [7, 7, 7]).value == 3
    assert fold(builtin("abs_max"), [-9, 4]).value == 9


def test_float_readings_are_exact_decimals():
    assert as_reading(0.1) == Fraction(1, 10)
    assert fold(builtin("sum"), [0.1, 0.2]).value == Fraction(3, 10)


def test_prf_combiners():
    assert fold(from_prf(catalog("max2")), [4, 1, 4]).value == 4
    assert fold(from_prf(catalog("add")), [1, 2, 3]).value == 6
    with pytest.raises(ArityMismatch):
        from_prf(SUCC)
    with pytest.raises(NonIntegerReading):
        fold(from_prf(catalog("add")), [1, Fraction(1, 2)])


@pytest.mark.parametrize("name", [n for n in BUILTIN_NAMES if not n.startswith("weighted")])
@given(data=st.data())
def test_ac_builtins_are_permutation_invariant(name, data):
    xs = data.draw(st.lists(rationals, min_size=1, max_size=12))
    perm = data.draw(st.permutations(xs))
    spec = builtin(name)
    assert fold(spec, xs).value == fold(spec, perm).value


@given(st.lists(rationals, min_size=1, max_size=20))
def test_mean_is_sum_over_count(xs):
    assert fold(builtin("mean"), xs).value == sum(xs) / len(xs)


@given(st.lists(rationals, min_size=1, max_size=20), st.integers(1, 5))
def test_comparisons_are_n_minus_one_times_cost(xs, x):
    assert fold(builtin("max", cost=x), xs).comparisons == (len(xs) - 1) * x


@given(st.lists(st.integers(0, 40), min_size=1, max_size=8))
def test_prf_max_matches_native(xs):
    assert fold(from_prf(catalog("max2")), xs).value == max(xs)
