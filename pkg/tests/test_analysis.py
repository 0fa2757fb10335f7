from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridfuse import kernels
from gridfuse.analysis import (
    ErrorModel,
    enumerate_error_probability,
    monte_carlo_error_probability,
    planted_max,
    published_error_probability,
    sweep,
)
from gridfuse.errors import InputError, TooLarge
from gridfuse.fusion import builtin
from gridfuse.sim import NodeFailure
from gridfuse.topology import GridParams

MAX = builtin("max")


def test_published_formula_examples():
    v = published_error_probability(ErrorModel(4, 1, Fraction(1, 10)))
    assert v == Fraction(729, 40000) and float(v) == 0.018225
    assert published_error_probability(ErrorModel(1, 1, 1)) == 1
    assert published_error_probability(ErrorModel(3, 3, 0)) == 0


def test_enumeration_examples():
    # every subset in which the single max holder fails is wrong: total weight p
    assert enumerate_error_probability(ErrorModel(4, 1, Fraction(1, 10))) == Fraction(1, 10)
    assert enumerate_error_probability(ErrorModel(3, 3, Fraction(1, 2))) == Fraction(1, 8)
    assert enumerate_error_probability(ErrorModel(5, 2, 0)) == 0


def test_enumeration_limit():
    with pytest.raises(TooLarge):
        enumerate_error_probability(ErrorModel(26, 1, Fraction(1, 2)))


def test_model_validation():
    with pytest.raises(InputError):
        ErrorModel(3, 4, 0.1)
    with pytest.raises(InputError):
        ErrorModel(3, 1, 1.5)


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))),
       st.fractions(0, 1, max_denominator=16))
def test_enumeration_is_p_to_the_m(nm, p):
    n, m = nm
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    for d0 in (divisors[0], divisors[-1]):
        assert enumerate_error_probability(ErrorModel(n, m, p), grid=GridParams(n, d0)) == p**m


@given(st.integers(2, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_error_falls_with_more_max_holders(nm):
    n, m = nm
    p = Fraction(1, 3)
    assert enumerate_error_probability(ErrorModel(n, m + 1, p)) < enumerate_error_probability(
        ErrorModel(n, m, p)
    )


def test_planted_max_shape():
    r = planted_max(10, 3, seed=4)
    vals = sorted(r.values())
    assert vals[-3:] == [8, 8, 8] and vals[:7] == list(range(1, 8))


def test_monte_carlo_edges():
    g = GridParams(8, 4)
    assert monte_carlo_error_probability(ErrorModel(8, 2, 0), MAX, g, 2000, 1).estimate == 0
    assert monte_carlo_error_probability(ErrorModel(8, 8, 1), MAX, g, 2000, 1).estimate == 1


def test_monte_carlo_rejects_zero_trials():
    with pytest.raises(InputError):
        monte_carlo_error_probability(ErrorModel(4, 1, 0.1), MAX, GridParams(4, 2), 0, 1)


def test_monte_carlo_close_to_exact():
    est = monte_carlo_error_probability(ErrorModel(16, 2, 0.1), MAX, GridParams(16, 4), 200_000, 9)
    assert abs(est.estimate - 0.01) <= 3 * (0.01 * 0.99 / 200_000) ** 0.5


def test_worker_count_does_not_change_the_answer():
    m = ErrorModel(16, 1, 0.2)
    runs = {monte_carlo_error_probability(m, MAX, GridParams(16, 4), 30_001, 5, workers=w).wrong for w in (1, 2, 3, 7)}
    assert len(runs) == 1


def test_simulator_path_matches_kernel():
    # abs_max over positive readings is max, but it runs through the full simulator
    m = ErrorModel(12, 2, 0.25)
    g = GridParams(12, 4)
    fast = monte_carlo_error_probability(m, MAX, g, 3000, 21)
    slow = monte_carlo_error_probability(m, builtin("abs_max"), g, 3000, 21)
    assert slow.backend == "simulator" and fast.backend == kernels.BACKEND
    assert fast.wrong == slow.wrong


def test_crash_mode_counts_sink_failures():
    m = ErrorModel(4, 1, 0.5)
    crash = monte_carlo_error_probability(m, MAX, GridParams(4, 2), 4000, 3, failure_mode=NodeFailure.CRASH)
    assert crash.backend == "simulator" and crash.estimate > 0.5


@pytest.mark.skipif("cython" not in kernels.backends(), reason="compiled kernel not built")
@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.sampled_from([d for d in range(1, n + 1) if n % d == 0]), st.lists(st.integers(0, 20), min_size=n, max_size=n))),
       st.floats(0, 1), st.integers(0, 2**40))
def test_backends_agree(case, p, seed):
    d0, values = case
    impls = kernels.backends()
    counts = {k: kernels.count_wrong_trials(values, d0, p, seed, 0, 500, impl=v) for k, v in impls.items()}
    assert counts["cython"] == counts["python"]
    if len(values) <= 12:
        hists = {k: kernels.failure_histogram(values, d0, impl=v) for k, v in impls.items()}
        assert hists["cython"] == hists["python"]


def test_sweep_rows():
    rows = sweep(4, 1, [0, "1/10", 0.5], GridParams(4, 2), MAX, 2000, 3)
    assert [r["p_f"] for r in rows] == ["0", "1/10", "1/2"]
    assert rows[0]["published_formula"] == rows[0]["enumeration"] == rows[0]["monte_carlo"] == 0
    assert rows[1]["published_formula"] == 0.018225 and rows[1]["enumeration"] == 0.1
    assert rows[1]["published_minus_enumeration"] == pytest.approx(0.018225 - 0.1)
