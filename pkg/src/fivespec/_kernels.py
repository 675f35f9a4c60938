"""Compiled hot loops shared by the analysis and search code.

Everything in here is integer arithmetic on small contiguous arrays; the
search evaluates millions of candidate functions per run, so these live
behind numba rather than vectorized numpy (which is call-overhead bound
at spectrum sizes of 32..65536).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def fwht_inplace(w):
    """In-place fast Walsh-Hadamard butterfly on an int64 vector."""
    size = w.shape[0]
    h = 1
    while h < size:
        i = 0
        while i < size:
            for j in range(i, i + h):
                x = w[j]
                y = w[j + h]
                w[j] = x + y
                w[j + h] = x - y
            i += 2 * h
        h *= 2


@njit(cache=True)
def walsh_from_bits(bits):
    """Walsh-Hadamard coefficients of a 0/1 truth table given as uint8."""
    size = bits.shape[0]
    w = np.empty(size, np.int64)
    for i in range(size):
        w[i] = 1 - 2 * np.int64(bits[i])
    fwht_inplace(w)
    return w


@njit(cache=True)
def spectrum_stats(w):
    """Return (max |w|, occurrences of max |w|, distinct value count)."""
    max_abs = np.int64(0)
    for v in w:
        a = -v if v < 0 else v
        if a > max_abs:
            max_abs = a
    max_count = 0
    for v in w:
        a = -v if v < 0 else v
        if a == max_abs:
            max_count += 1
    s = np.sort(w)
    distinct = 1
    for i in range(1, s.shape[0]):
        if s[i] != s[i - 1]:
            distinct += 1
    return max_abs, max_count, distinct


@njit(cache=True)
def off_profile_count(w, low_mag, high_mag):
    """Count coefficients whose value lies outside {0, +-low_mag, +-high_mag}."""
    count = 0
    for v in w:
        a = -v if v < 0 else v
        if a != 0 and a != low_mag and a != high_mag:
            count += 1
    return count
