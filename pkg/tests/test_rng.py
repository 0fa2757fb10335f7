from hypothesis import given
from hypothesis import strategies as st

from gridfuse.rng import failure_mask, mix64, trial_key, uniforms


def test_mix64_known_value():
    # splitmix64 finaliser applied to 0 + golden gamma, the first output for seed 0
    assert mix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF


@given(st.integers(0, 2**64 - 1), st.integers(0, 10**6), st.integers(1, 50))
def test_uniforms_are_reproducible_and_in_range(seed, trial, n):
    u = uniforms(seed, trial, n)
    assert u == uniforms(seed, trial, n)
    assert all(0 <= x < 1 for x in u)


def test_trials_differ():
    assert trial_key(1, 0) != trial_key(1, 1)
    assert uniforms(1, 0, 8) != uniforms(1, 1, 8)


def test_mask_extremes():
    assert failure_mask(3, 4, 10, 0.0) == [False] * 10
    assert failure_mask(3, 4, 10, 1.0) == [True] * 10


def test_mask_rate():
    hits = sum(sum(failure_mask(7, t, 10, 0.3)) for t in range(2000))
    assert abs(hits / 20000 - 0.3) < 0.02
