"""NumPy implementation of the max-fold kernels.

Used when the compiled extension is missing or ``GRIDFUSE_PURE_PYTHON`` is
set.  Trials (or failure masks) are processed in vectorised chunks; the
per-node loop follows the grid's branch and backbone order.
"""

import numpy as np

from .rng import GOLDEN

_GOLDEN = np.uint64(GOLDEN)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S11, _S27, _S30, _S31 = (np.uint64(k) for k in (11, 27, 30, 31))
_INV53 = 1.0 / (1 << 53)
CHUNK = 1 << 16


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _grid_max(values: np.ndarray, failed: np.ndarray, d0: int) -> np.ndarray:
    # failed: (trials, n) bool; returns per-trial fold result, -1 if empty
    n = values.shape[0]
    acc = np.full(failed.shape[0], -1, dtype=np.int64)
    for b in range(n // d0):
        branch_acc = np.full(failed.shape[0], -1, dtype=np.int64)
        for d in range(d0 - 1, -1, -1):
            i = b * d0 + d
            branch_acc = np.maximum(branch_acc, np.where(failed[:, i], -1, values[i]))
        acc = np.maximum(acc, branch_acc)
    return acc


def count_wrong_trials(values, d0, p, seed_key, start, stop):
    values = np.ascontiguousarray(values, dtype=np.int64)
    n = values.shape[0]
    true_max = values.max()
    wrong = 0
    with np.errstate(over="ignore"):
        for lo in range(start, stop, CHUNK):
            t = np.arange(lo, min(lo + CHUNK, stop), dtype=np.uint64)
            s = _mix64(np.uint64(seed_key) + t * _GOLDEN)
            failed = np.empty((t.shape[0], n), dtype=bool)
            for i in range(n):
                s = s + _GOLDEN
                failed[:, i] = (_mix64(s) >> _S11).astype(np.float64) * _INV53 < p
            wrong += int(np.count_nonzero(_grid_max(values, failed, d0) != true_max))
    return wrong


def failure_histogram(values, d0):
    values = np.ascontiguousarray(values, dtype=np.int64)
    n = values.shape[0]
    true_max = values.max()
    hist = np.zeros(n + 1, dtype=np.int64)
    total = 1 << n
    chunk = max(CHUNK, 1 << 20)
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.uint64)
        failed = np.empty((masks.shape[0], n), dtype=bool)
        for i in range(n):
            failed[:, i] = (masks >> np.uint64(i)) & np.uint64(1)
        wrong = _grid_max(values, failed, d0) != true_max
        k = np.bitwise_count(masks[wrong]).astype(np.int64)
        hist += np.bincount(k, minlength=n + 1)
    return hist
