"""Backend selection for the max-fold kernels.

The compiled ``_kernels`` extension is used when importable; otherwise, or
when the environment variable ``GRIDFUSE_PURE_PYTHON`` is set to a
non-empty value other than ``0``, the NumPy fallback is used.  Both give
identical answers.
"""

import os

import numpy as np

from . import _kernels_py
from .rng import MASK64, mix64


def _load():
    if os.environ.get("GRIDFUSE_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "cython"


_impl, BACKEND = _load()


def seed_key(seed: int) -> int:
    return mix64(seed & MASK64)


def count_wrong_trials(values, d0: int, p: float, seed: int, start: int, stop: int, impl=None) -> int:
    """Number of trials in ``[start, stop)`` whose grid max differs from the true max."""
    impl = impl or _impl
    values = np.ascontiguousarray(values, dtype=np.int64)
    return int(impl.count_wrong_trials(values, d0, float(p), seed_key(seed), start, stop))


def failure_histogram(values, d0: int, impl=None):
    """``hist[k]``: failure subsets of size ``k`` after which the grid max is wrong."""
    impl = impl or _impl
    values = np.ascontiguousarray(values, dtype=np.int64)
    return [int(x) for x in impl.failure_histogram(values, d0)]


def backends():
    """All importable implementations, keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out
