"""Weyl sums, forward differences and the linear-sum estimates built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CostGuardError, InvalidApproximationError, PrecisionError
from .polynomial import PolynomialPhase, _strip, poly_shift, poly_sub
from .reals import as_real
from .reduction import frac_linear
from .reports import BoundReport

__all__ = [
    "DifferencePolynomial",
    "nearest_int_dist",
    "forward_difference",
    "weyl_sum",
    "weyl_phases",
    "weyl_inequality_check",
    "differenced_sum",
    "representation_count",
    "representation_counts",
    "minsum",
    "minsum_terms",
    "korobov_bound_check",
    "WEYL_GUARDS",
]

TWO_PI = 2.0 * math.pi

# largest n for exhaustive differencing, by order j
WEYL_GUARDS = {1: 512, 2: 64, 3: 32, 4: 16}

_CHUNK = 1 << 22


def nearest_int_dist(x):
    """Distance to the nearest integer; exact for ``Fraction``/``int``, vectorised for arrays."""
    if isinstance(x, (Fraction, int)):
        f = Fraction(x) - math.floor(x)
        return min(f, 1 - f)
    a = np.asarray(x, dtype=float)
    d = np.abs(a - np.round(a))
    return float(d) if d.ndim == 0 else d


@dataclass(frozen=True)
class DifferencePolynomial:
    """``Delta_j phi(x; h_1, ..., h_j)`` as a polynomial in ``x`` (highest first)."""

    base: PolynomialPhase
    order: int
    shifts: tuple
    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def expected_leading(self):
        """``k!/(k-j)! * a_0 * h_1 ... h_j``."""
        k, j = self.base.degree, self.order
        if j > k:
            return 0
        return math.factorial(k) // math.factorial(k - j) * self.base.leading * math.prod(self.shifts)

    def __call__(self, x):
        acc = 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc


def forward_difference(base: PolynomialPhase, shifts) -> DifferencePolynomial:
    """Iterated forward difference; shifts may be numbers or sympy symbols."""
    shifts = tuple(shifts)
    c = list(base.coeffs)
    for h in shifts:
        c = poly_sub(poly_shift(c, h), c)
        c = c[1:] if len(c) > 1 else [0]
    return DifferencePolynomial(base, len(shifts), shifts, tuple(c))


def weyl_phases(phase: PolynomialPhase, n: int, ell: int) -> list[Fraction]:
    """Exact ``n * l * phi(x/n) mod 1`` for ``x = 1 .. n``."""
    out = []
    for x in range(1, n + 1):
        v = n * ell * phase(Fraction(x, n))
        out.append(v - math.floor(v))
    return out


def weyl_sum(phase: PolynomialPhase, n: int, ell: int) -> complex:
    """``T(phi; n, l) = sum_{x=1}^n e(n l phi(x/n))``."""
    th = np.array([float(v) for v in weyl_phases(phase, n, ell)])
    return complex(np.exp(TWO_PI * 1j * th).sum())


def differenced_sum(u: np.ndarray, j: int) -> float:
    """``sum_{|h_1|<n} ... sum_{|h_j|<n} sum_{x in I_j} e(Delta_j f(x; h))`` from ``u = e(f)``.

    ``I_j`` is the set of ``x`` for which every point ``x + sum(subset of h)``
    stays in ``[1, n]``; the sum is evaluated term by term.
    """
    n = u.size
    total = 0.0

    def rec(v, depth):
        nonlocal total
        if depth == j:
            # all h_j at once: c[h] = sum_x v(x + h) conj(v(x)) over the current I
            total += np.correlate(v, v, mode="full").real.sum()
            return
        for h in range(-(n - 1), n):
            w = np.zeros_like(v)
            if h >= 0:
                w[: n - h] = v[h:] * np.conj(v[: n - h])
            else:
                w[-h:] = v[: n + h] * np.conj(v[-h:])
            if np.any(w):
                rec(w, depth + 1)

    rec(u.astype(np.complex128), 1)
    return float(total)


def weyl_inequality_check(phase: PolynomialPhase, n: int, j: int, ell: int = 1, guard: dict | None = None) -> BoundReport:
    """``|T|**(2**j) <= (2n)**(2**j - j - 1) * sum_h sum_{x in I_j} e(Delta_j f)`` for ``f(x) = n l phi(x/n)``."""
    guard = WEYL_GUARDS if guard is None else guard
    if j < 1 or j > max(1, phase.degree - 1):
        raise ValueError(f"need 1 <= j <= degree - 1 (degree {phase.degree})")
    if n > guard.get(j, 0):
        raise CostGuardError(f"n={n} exceeds the exhaustive bound {guard.get(j, 0)} for j={j}; use smaller n or j")
    th = np.array([float(v) for v in weyl_phases(phase, n, ell)])
    u = np.exp(TWO_PI * 1j * th)
    lhs = abs(u.sum()) ** (2**j)
    inner = differenced_sum(u, j)
    const = (2 * n) ** (2**j - j - 1)
    # a vanishing sum leaves only rounding noise of order (terms summed) * eps
    atol = 64 * np.finfo(float).eps * const * (2 * n) ** j * n
    return BoundReport("weyl-differencing", lhs, const * inner, atol=atol,
                       detail={"n": n, "j": j, "ell": ell, "inner": inner, "constant": const})


def _positive_tuples(y: int, parts: int, n: int) -> int:
    """Ordered ``parts``-tuples from ``[1, n]`` with product ``y``."""

    @lru_cache(maxsize=None)
    def count(y, parts):
        if parts == 1:
            return 1 if 1 <= y <= n else 0
        total = 0
        d = 1
        while d * d <= y:
            if y % d == 0:
                for e in {d, y // d}:
                    if e <= n:
                        total += count(y // e, parts - 1)
            d += 1
        return total

    return count(y, parts)


def representation_count(x: int, n: int, factors: int = 2, factorial_scale: bool = False) -> int:
    """Number of tuples ``(h_1, ..., h_{factors-1}, l)`` in ``[-n, n] \\ {0}`` with product ``x``.

    With ``factorial_scale`` the product is multiplied by ``factors!`` first.
    """
    if factors < 2:
        raise ValueError("factors must be >= 2")
    if x == 0:
        raise ValueError("x must be nonzero")
    y = abs(int(x))
    if factorial_scale:
        f = math.factorial(factors)
        if y % f:
            return 0
        y //= f
    if y > n**factors:
        return 0
    if math.isqrt(y) > 10**7:
        raise CostGuardError("representation_count: |x| too large for divisor enumeration")
    return _positive_tuples(y, factors, n) * 2 ** (factors - 1)


def representation_counts(n: int, factors: int, max_size: int = 5 * 10**7) -> np.ndarray:
    """``c[y]`` = ordered positive ``factors``-tuples from ``[1, n]`` with product ``y``, ``y <= n**factors``."""
    size = n**factors + 1
    if size > max_size:
        raise CostGuardError(f"count table of size {size} exceeds {max_size}")
    cur = np.zeros(n + 1, dtype=np.int64)
    cur[1:] = 1
    for _ in range(factors - 1):
        nxt = np.zeros(cur.size * n - n + 1 if cur.size > 1 else 1, dtype=np.int64)
        m = cur.size - 1
        for ell in range(1, n + 1):
            nxt[ell: ell * m + 1: ell] += cur[1:]
        cur = nxt
    return cur


def _check_linear_precision(alpha, X: int, scale: int):
    r = as_real(alpha)
    if not r.exact and X * r.radius / scale >= Fraction(1, 2**50):
        need = math.ceil(math.log10(X / scale * 2**50)) + 1
        raise PrecisionError(f"alpha known to {r.digits} digits; X={X} needs about {need}", required_digits=need)
    return r.value


def minsum_terms(alpha, n: int, scale_power: int, X: int, cap: float, factor: float = 2.0, start: int = 1,
                 beta=0) -> np.ndarray:
    """Array of ``min(cap, 1/(factor ||x alpha / n**s + beta||))`` for ``start <= x <= X``."""
    scale = n**scale_power
    a = _check_linear_precision(alpha, X, scale)
    c = a / scale
    b = as_real(beta).value
    out = np.empty(max(0, X - start + 1), dtype=np.float64)
    for lo in range(start, X + 1, _CHUNK):
        hi = min(X, lo + _CHUNK - 1)
        fr = frac_linear(c, np.arange(lo, hi + 1, dtype=np.int64), b)
        d = np.minimum(fr, 1.0 - fr)
        with np.errstate(divide="ignore"):
            t = np.where(d * factor * cap > 1.0, 1.0 / (factor * d), cap)
        out[lo - start: hi - start + 1] = t
    return out


def minsum(alpha, n: int, scale_power: int, X: int, cap: float, factor: float = 2.0) -> float:
    """``sum_{x=1}^X min(cap, 1/(factor ||x alpha / n**scale_power||))``."""
    if X < 1:
        raise ValueError("X must be >= 1")
    return math.fsum(minsum_terms(alpha, n, scale_power, X, cap, factor).tolist())


def korobov_bound_check(alpha, beta, P: int, Q: int, approx) -> BoundReport:
    """``sum_{x<=Q} min(P, 1/||alpha x + beta||)`` against ``(1 + Q/q)(P + q log P)``."""
    r = as_real(alpha)
    a, q = approx.a, approx.q
    if q < 1 or math.gcd(a, q) != 1:
        raise InvalidApproximationError("need q >= 1 and gcd(a, q) = 1")
    worst = max(abs(r.lo - Fraction(a, q)), abs(r.hi - Fraction(a, q)))
    if worst >= Fraction(1, q * q):
        raise InvalidApproximationError(f"|alpha - {a}/{q}| is not below 1/q**2")
    lhs = math.fsum(minsum_terms(alpha, 1, 0, Q, float(P), factor=1.0, beta=beta).tolist())
    shape = (1 + Q / q) * (P + q * math.log(P)) if P > 1 else (1 + Q / q) * P
    return BoundReport("korobov", lhs, shape, explicit=False, detail={"P": P, "Q": Q, "a": a, "q": q})
