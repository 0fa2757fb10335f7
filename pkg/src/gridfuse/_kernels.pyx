# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled max-fold kernels.  Semantics match ``_kernels_py`` exactly."""

from libc.stdint cimport int64_t, uint64_t
import numpy as np

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline int64_t grid_max(const int64_t[::1] values, const unsigned char[::1] failed,
                             Py_ssize_t n, Py_ssize_t d0) nogil:
    # branch chains leaf -> head, then the backbone head 0 -> head B-1;
    # -1 marks an empty register
    cdef Py_ssize_t nb = n // d0, b, d, i
    cdef int64_t acc, branch_acc, v
    acc = -1
    for b in range(nb):
        branch_acc = -1
        for d in range(d0 - 1, -1, -1):
            i = b * d0 + d
            if not failed[i]:
                v = values[i]
                if v > branch_acc:
                    branch_acc = v
        if branch_acc > acc:
            acc = branch_acc
    return acc


def count_wrong_trials(const int64_t[::1] values, Py_ssize_t d0, double p,
                       uint64_t seed_key, Py_ssize_t start, Py_ssize_t stop):
    cdef Py_ssize_t n = values.shape[0], i, t
    cdef int64_t true_max = -1
    cdef uint64_t s
    cdef long long wrong = 0
    cdef unsigned char[::1] failed = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        if values[i] > true_max:
            true_max = values[i]
    with nogil:
        for t in range(start, stop):
            s = mix64(seed_key + <uint64_t>t * GOLDEN)
            for i in range(n):
                s = s + GOLDEN
                failed[i] = ((mix64(s) >> 11) * INV53) < p
            if grid_max(values, failed, n, d0) != true_max:
                wrong += 1
    return wrong


def failure_histogram(const int64_t[::1] values, Py_ssize_t d0):
    cdef Py_ssize_t n = values.shape[0], i
    cdef int64_t true_max = -1
    cdef uint64_t mask, total = (<uint64_t>1) << n
    cdef int k
    cdef unsigned char[::1] failed = np.zeros(n, dtype=np.uint8)
    hist_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] hist = hist_arr
    for i in range(n):
        if values[i] > true_max:
            true_max = values[i]
    with nogil:
        for mask in range(total):
            k = 0
            for i in range(n):
                failed[i] = (mask >> i) & 1
                k += failed[i]
            if grid_max(values, failed, n, d0) != true_max:
                hist[k] += 1
    return hist_arr
