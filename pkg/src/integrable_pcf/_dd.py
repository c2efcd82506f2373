"""Vectorised double-double arithmetic (about 106 bits of significand).

A double-double is a pair ``(hi, lo)`` of float64 arrays with ``|lo| <= ulp(hi)/2``.
Only the handful of operations needed for phase reduction are provided.
"""

from fractions import Fraction

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def add(x, y):
    s, e = two_sum(x[0], y[0])
    t, f = two_sum(x[1], y[1])
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e = e + (x[0] * y[1] + x[1] * y[0])
    return quick_two_sum(p, e)


def from_fraction(q: Fraction):
    """Nearest double-double to an exact rational (scalar)."""
    q = Fraction(q)
    hi = float(q)
    lo = float(q - Fraction(hi))
    return np.float64(hi), np.float64(lo)


def ratio_int(k: np.ndarray, n: int):
    """Double-double ``k / n`` for an integer array ``k`` with ``|k| < 2**53``."""
    kf = k.astype(np.float64)
    q = kf / n
    p, e = two_prod(q, np.float64(n))
    r = (kf - p) - e
    return quick_two_sum(q, r / n)


def frac(x):
    """Fractional part in ``[0, 1)`` of a double-double, returned as (hi, lo)."""
    hi, lo = x
    s, e = two_sum(hi - np.floor(hi), lo)
    s, e = quick_two_sum(s - np.floor(s), e)
    s = np.where(s + e < 0, s + 1.0, s)
    s = np.where(s >= 1.0, s - 1.0, s)
    return quick_two_sum(s, e)
