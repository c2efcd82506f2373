"""Polynomial phase functions with exact rational coefficients.

Coefficients are stored highest degree first, ``phi(x) = c[0] x**k + ... + c[k]``.
The helpers below work on plain coefficient lists so they also accept sympy
symbols (used in the tests to check the difference operator symbolically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from .errors import DegeneratePolynomialError
from .reals import as_real

__all__ = [
    "PolynomialPhase",
    "HypothesisReport",
    "validate_hypotheses",
    "poly_eval",
    "poly_derivative",
    "poly_shift",
    "count_roots",
    "isolate_roots",
]


def _strip(c):
    i = 0
    while i < len(c) - 1 and c[i] == 0:
        i += 1
    return list(c[i:])


def poly_eval(coeffs, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_derivative(coeffs):
    k = len(coeffs) - 1
    if k == 0:
        return [0]
    return [c * (k - i) for i, c in enumerate(coeffs[:-1])]


def poly_shift(coeffs, h):
    """Coefficients of ``p(x + h)`` (highest first), by repeated synthetic division."""
    out = list(coeffs)
    k = len(out) - 1
    for i in range(k):
        for j in range(1, k - i + 1):
            out[j] = out[j] + h * out[j - 1]
    return out


def poly_sub(a, b):
    n = max(len(a), len(b))
    a = [0] * (n - len(a)) + list(a)
    b = [0] * (n - len(b)) + list(b)
    return [x - y for x, y in zip(a, b)]


def _poly_rem(a, b):
    a = [Fraction(x) for x in _strip(a)]
    b = [Fraction(x) for x in _strip(b)]
    while len(a) >= len(b) and any(a):
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a = _strip(a[1:]) if len(a) > 1 else [Fraction(0)]
    return a


def _sturm_chain(p):
    chain = [_strip(p), _strip(poly_derivative(p))]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        if len(chain[-1]) == 1:
            break
        r = _poly_rem(chain[-2], chain[-1])
        if not any(r):
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x):
    signs = [s for s in (poly_eval(c, x) for c in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def count_roots(coeffs, lo, hi) -> int:
    """Number of distinct real roots of a rational polynomial in ``[lo, hi]`` (exact)."""
    p = [Fraction(c) for c in _strip(coeffs)]
    if len(p) == 1:
        return 0 if p[0] != 0 else math.inf
    lo, hi = Fraction(lo), Fraction(hi)
    chain = _sturm_chain(p)
    # Sturm counts roots in (lo, hi]; add a root sitting exactly on lo
    n = _sign_changes(chain, lo) - _sign_changes(chain, hi)
    return n + (1 if poly_eval(p, lo) == 0 else 0)


def isolate_roots(coeffs, lo=-1, hi=1, width=Fraction(1, 2**20)):
    """Disjoint rational intervals ``(a, b)``, each holding exactly one root in ``[lo, hi]``.

    A root hit exactly by the subdivision is returned as ``(r, r)``.
    """
    p = [Fraction(c) for c in _strip(coeffs)]
    lo, hi = Fraction(lo), Fraction(hi)
    if len(p) == 1:
        return [] if p[0] != 0 else [(lo, hi)]
    chain = _sturm_chain(p)
    out = [(lo, lo)] if poly_eval(p, lo) == 0 else []
    stack = [(lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb  # roots in (a, b]
        if n <= 0:
            continue
        pb = poly_eval(p, b)
        if n == 1:
            if pb == 0:
                out.append((b, b))
                continue
            if b - a <= width or poly_eval(p, a) * pb < 0:
                out.append((a, b))
                continue
        m = (a + b) / 2
        vm = _sign_changes(chain, m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    return sorted(out)


@dataclass(frozen=True)
class PolynomialPhase:
    """``phi(x) = coeffs[0] x**degree + ... + coeffs[degree]`` with rational coefficients."""

    coeffs: tuple = field()

    def __post_init__(self):
        c = tuple(Fraction(as_real(x).value) if not isinstance(x, Fraction) else x for x in self.coeffs)
        c = tuple(_strip(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_string(cls, text: str) -> "PolynomialPhase":
        """Parse a comma separated coefficient list, e.g. ``"1,0,0"`` for ``x**2``."""
        return cls(tuple(Fraction(t.strip()) for t in text.split(",") if t.strip()))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[0]

    def __call__(self, x):
        return poly_eval(self.coeffs, x)

    def derivative(self, order: int = 1) -> list:
        c = list(self.coeffs)
        for _ in range(order):
            c = poly_derivative(c)
        return c

    def max_abs(self, lo=-1, hi=1) -> Fraction:
        """Rational upper bound for ``|phi|`` on ``[lo, hi]`` (sum of |c_i| r**i)."""
        r = max(abs(Fraction(lo)), abs(Fraction(hi)))
        return sum((abs(c) * r ** (self.degree - i) for i, c in enumerate(self.coeffs)), Fraction(0))

    def integer_form(self):
        """``(C, d)`` with integer coefficients ``C`` (highest first) and ``phi = C/d``."""
        d = math.lcm(*(c.denominator for c in self.coeffs))
        return [int(c * d) for c in self.coeffs], d


@dataclass(frozen=True)
class HypothesisReport:
    convex_ok: bool  # (i): phi'' has no root in [-1, 1]
    twist_ok: bool  # (ii): alpha phi' + beta has no root in [-1, 1]
    second_derivative_roots: list
    twist_roots: list

    @property
    def ok(self) -> bool:
        return self.convex_ok and self.twist_ok


def validate_hypotheses(phase: PolynomialPhase, alpha=1, beta=0) -> HypothesisReport:
    """Exact root checks for ``phi''`` and ``alpha phi' + beta`` on ``[-1, 1]``.

    ``alpha`` may also be a :class:`~integrable_pcf.spectrum.SpectrumParams`, in
    which case its alpha and beta are used.  Decimal approximations are tested
    at their centre value.
    """
    if hasattr(alpha, "alpha") and hasattr(alpha, "beta"):
        alpha, beta = alpha.alpha, alpha.beta
    if phase.degree < 2:
        raise DegeneratePolynomialError(f"phase of degree {phase.degree}; need degree >= 2")
    a = as_real(alpha).value
    b = as_real(beta).value
    d2 = phase.derivative(2)
    twist = [a * c for c in phase.derivative(1)]
    twist[-1] += b
    r2 = isolate_roots(d2)
    rt = isolate_roots(twist)
    return HypothesisReport(not r2, not rt, r2, rt)
