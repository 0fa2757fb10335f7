"""Counter-based failure sampling shared by every backend.

Trial ``t`` under seed ``s`` gets a stream key from splitmix64, and node
``i`` fails when the ``i``-th draw of that stream is below ``p``.  The
result depends only on ``(s, t, i, p)``, so any split of trials across
threads or backends reproduces the same failure sets.
"""

from typing import List

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def trial_key(seed: int, trial: int) -> int:
    return mix64((mix64(seed & MASK64) + trial * GOLDEN) & MASK64)


def uniforms(seed: int, trial: int, n: int) -> List[float]:
    s = trial_key(seed, trial)
    out = []
    for _ in range(n):
        s = (s + GOLDEN) & MASK64
        out.append((mix64(s) >> 11) * _INV53)
    return out


def failure_mask(seed: int, trial: int, n: int, p: float) -> List[bool]:
    return [u < p for u in uniforms(seed, trial, n)]
