"""Reduction of large phases modulo one.

Two engines are provided for the polynomial phases
``theta_k = n * (alpha * phi(k/n) + beta * k/n)``:

* :class:`ExactPhases` keeps ``theta_k = N_k / D`` as exact integers, so every
  multiple ``l * theta_k mod 1`` is exact before the final rounding to float64.
* :class:`DDPhases` evaluates the phase in double-double arithmetic and reduces
  before any multiplication by 2 pi; the reduction error is below
  ``n * |alpha| * max|phi| * 2**-100``.

:func:`frac_linear` reduces ``c * x + b`` for large integer arrays ``x``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import _dd
from .errors import PrecisionError

__all__ = ["ExactPhases", "DDPhases", "frac_linear", "REDUCTION_BUDGET"]

REDUCTION_BUDGET = Fraction(1, 2**60)


def _as_object(ints) -> np.ndarray:
    out = np.empty(len(ints), dtype=object)
    out[:] = [int(v) for v in ints]
    return out


def _obj_ratio_to_float(num: np.ndarray, den: int) -> np.ndarray:
    # int / int is correctly rounded in Python
    return np.fromiter((v / den for v in num), dtype=np.float64, count=len(num))


class ExactPhases:
    """``theta_k = numerators[k] / denominator`` with ``0 <= numerators < denominator``."""

    def __init__(self, coeffs, alpha: Fraction, beta: Fraction, n: int, ks: np.ndarray):
        alpha, beta = Fraction(alpha), Fraction(beta)
        deg = len(coeffs) - 1
        d_phi = math.lcm(*(Fraction(c).denominator for c in coeffs))
        C = [int(Fraction(c) * d_phi) for c in coeffs]
        scale = d_phi * n ** (deg - 1)
        D = alpha.denominator * beta.denominator * scale
        # n*phi(k/n) = P(k) / scale with P(k) = sum_i C[i] n**i k**(deg-i)
        k = _as_object(ks)
        acc = np.full(len(k), C[0], dtype=object)
        for i in range(1, deg + 1):
            acc = acc * k + C[i] * n**i
        num = acc * (alpha.numerator * beta.denominator) + k * (beta.numerator * alpha.denominator * scale)
        self.denominator = D
        self.numerators = num % D

    def fractions(self):
        return [Fraction(int(v), self.denominator) for v in self.numerators]

    def phases(self) -> np.ndarray:
        return _obj_ratio_to_float(self.numerators, self.denominator)

    def multiple(self, ell: int) -> np.ndarray:
        """Float64 values of ``ell * theta_k mod 1`` reduced exactly."""
        return _obj_ratio_to_float((self.numerators * ell) % self.denominator, self.denominator)


class DDPhases:
    """Phases held as double-double fractional parts."""

    def __init__(self, coeffs, alpha: Fraction, beta: Fraction, n: int, ks: np.ndarray):
        ks = np.asarray(ks, dtype=np.int64)
        if ks.size and int(np.abs(ks).max()) >= 2**53:
            raise PrecisionError("index too large for double-double phases")
        x = _dd.ratio_int(ks, n)
        acc = _dd.from_fraction(coeffs[0])
        acc = (np.full(ks.shape, acc[0]), np.full(ks.shape, acc[1]))
        for c in coeffs[1:]:
            acc = _dd.add(_dd.mul(acc, x), _dd.from_fraction(c))
        acc = _dd.mul(acc, _dd.from_fraction(Fraction(alpha) * n))
        kf = ks.astype(np.float64)
        lin = _dd.mul(_dd.from_fraction(beta), (kf, np.zeros_like(kf)))
        self.hi, self.lo = _dd.frac(_dd.add(acc, lin))

    def phases(self) -> np.ndarray:
        return self.hi.copy()

    def multiple(self, ell: int) -> np.ndarray:
        ell = np.float64(ell)
        hi, lo = _dd.frac(_dd.mul((self.hi, self.lo), (ell, np.float64(0.0))))
        return hi


def frac_linear(c, x: np.ndarray, b=0) -> np.ndarray:
    """``(c * x + b) mod 1`` for a rational ``c``, ``b`` and integer array ``x``.

    Uses exact int64 arithmetic when the common denominator is below 2**31, otherwise splits
    ``c = C_hi / 2**32 + c_lo`` and reduces the high part exactly; the absolute
    error is then at most ``max|x| * 2**-85 + 2**-52``.
    """
    c, b = Fraction(c), Fraction(b)
    x = np.asarray(x, dtype=np.int64)
    xmax = int(np.abs(x).max()) if x.size else 0
    c = c - math.floor(c)
    b = b - math.floor(b)
    den = c.denominator * b.denominator
    if den < 2**31:
        cn = c.numerator * b.denominator
        bn = b.numerator * c.denominator
        r = (x % den) * cn % den
        r = (r + bn) % den
        return r / den
    if xmax >= 2**31:
        raise PrecisionError("frac_linear: |x| >= 2**31 needs the exact object path")
    c_hi = math.floor(c * 2**32)
    c_lo = float(c - Fraction(c_hi, 2**32))
    # uint64 products wrap mod 2**64, which preserves the residue mod 2**32
    xu = (x % 2**32).astype(np.uint64)
    hi = (xu * np.uint64(c_hi)) & np.uint64(2**32 - 1)
    out = hi.astype(np.float64) / 2.0**32 + x * c_lo + float(b)
    return out - np.floor(out)
