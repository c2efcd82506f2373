"""Continued fractions, continuants and rational approximation.

All integer work is exact (Python ints).  Interval inputs (decimal strings with
a declared precision) only emit partial quotients shared by every real in the
interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import InvalidApproximationError, PrecisionError
from .reals import Real, as_real
from .reports import BoundReport

__all__ = [
    "ContinuedFraction",
    "RationalApprox",
    "ConvergentRun",
    "GoodConvergent",
    "cf_expand",
    "cf_from_quotients",
    "continuant",
    "cross_determinant_check",
    "gcd_profile",
    "gcd_product_bound_check",
    "dirichlet_approx",
    "reduce_against",
    "find_convergents_in_range",
    "find_good_convergent",
    "f_n_alpha",
    "khinchin_levy_stat",
    "quotient_growth_check",
    "LEVY_CONSTANT",
]

LEVY_CONSTANT = math.exp(math.pi**2 / (12 * math.log(2)))


@dataclass(frozen=True)
class ContinuedFraction:
    quotients: tuple
    p: tuple
    q: tuple
    source_precision: int | None = None
    complete: bool = True  # expansion terminated (the input is this rational)
    truncated: bool = False  # stopped because the input interval straddles a quotient boundary

    def __len__(self):
        return len(self.quotients)

    def value(self, m: int | None = None) -> Fraction:
        m = len(self) - 1 if m is None else m
        return Fraction(self.p[m], self.q[m])


def cf_from_quotients(quotients, source_precision=None, complete=True, truncated=False) -> ContinuedFraction:
    a = tuple(int(x) for x in quotients)
    if not a:
        raise ValueError("empty continued fraction")
    if any(x <= 0 for x in a[1:]):
        raise ValueError("partial quotients after the first must be positive")
    p, q = [], []
    p2, p1, q2, q1 = 0, 1, 1, 0
    for x in a:
        p2, p1 = p1, x * p1 + p2
        q2, q1 = q1, x * q1 + q2
        p.append(p1)
        q.append(q1)
    return ContinuedFraction(a, tuple(p), tuple(q), source_precision, complete, truncated)


def cf_expand(x, max_terms: int = 10_000, precision: int | None = None) -> ContinuedFraction:
    """Expansion of an exact rational or of every real in a decimal interval.

    For an interval ``[lo, hi]`` a quotient is emitted only if ``floor`` agrees
    on the whole interval; otherwise the result is flagged ``truncated``.
    """
    r = as_real(x, precision)
    lo, hi = r.lo, r.hi
    quotients = []
    complete = truncated = False
    while len(quotients) < max_terms:
        a_lo, a_hi = math.floor(lo), math.floor(hi)
        if a_lo != a_hi:
            truncated = True
            break
        quotients.append(a_lo)
        lo, hi = lo - a_lo, hi - a_lo
        if lo == 0 and hi == 0:
            complete = True
            break
        if lo == 0:
            # interval touches the integer a: the next quotient is unbounded
            truncated = True
            break
        lo, hi = 1 / hi, 1 / lo
    return cf_from_quotients(quotients, r.digits, complete, truncated)


def continuant(quotient_slice) -> int:
    """``E_k`` of a slice: ``E_0 = 1``, ``E_1(a) = a``, ``E_j = s[j-1] E_{j-1} + E_{j-2}``."""
    e2, e1 = 0, 1
    for a in quotient_slice:
        e2, e1 = e1, int(a) * e1 + e2
    return e1


def cross_determinant_check(cf: ContinuedFraction, m: int, k: int) -> tuple[int, int]:
    """``p_m q_{m-k} - p_{m-k} q_m`` and the continuant of ``a_m, ..., a_{m-k+2}``.

    The absolute values agree exactly; a mismatch is a defect in this module.
    """
    if not 1 <= k <= m < len(cf):
        raise ValueError(f"need 1 <= k <= m < {len(cf)}")
    lhs = cf.p[m] * cf.q[m - k] - cf.p[m - k] * cf.q[m]
    e = continuant(cf.quotients[m - k + 2: m + 1][::-1])
    if abs(lhs) != e:
        raise AssertionError(f"cross determinant identity violated at m={m}, k={k}: {lhs} vs {e}")
    return lhs, (e if lhs >= 0 else -e)


def gcd_profile(cf: ContinuedFraction, n: int, k: int, index_window=None) -> list[tuple[int, int]]:
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    N = n ** (k - 1)
    idx = range(len(cf)) if index_window is None else index_window
    return [(m, math.gcd(cf.p[m], N)) for m in idx]


def gcd_product_bound_check(cf: ContinuedFraction, n: int, k: int, m: int, M: int) -> BoundReport:
    """Product of ``gcd(p_{m-j}, n**(k-1))`` for ``0 <= j <= M`` against its continuant bound."""
    if not 0 <= m - M and m < len(cf):
        raise ValueError("need 0 <= m - M and m < len(cf)")
    N = n ** (k - 1)
    lhs = math.prod(math.gcd(cf.p[m - j], N) for j in range(M + 1))
    a = cf.quotients
    rhs = N
    for j in range(M + 1):
        for ell in range(1, M - j + 1):
            rhs *= continuant(a[m - j - ell + 1: m - j + 1][::-1])
    return BoundReport(
        "gcd-product",
        lhs,
        rhs,
        explicit=True,
        exact=True,
        detail={"n": n, "k": k, "m": m, "M": M},
    )


@dataclass(frozen=True)
class RationalApprox:
    """``alpha = a/q + theta/q**2`` with ``|theta| <= remainder_bound``."""

    a: int
    q: int
    remainder_bound: Fraction
    reduced: bool = True

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.q)


def dirichlet_approx(alpha, Q: int) -> RationalApprox:
    """Reduced ``a/q`` with ``q <= Q`` and ``|alpha - a/q| <= 1/(q Q)``, certified exactly.

    The candidate is the last convergent with denominator ``<= Q``.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    r = as_real(alpha)
    cf = cf_expand(r)
    m = max(i for i in range(len(cf)) if cf.q[i] <= Q)
    a, q = cf.p[m], cf.q[m]
    worst = max(abs(r.lo - Fraction(a, q)), abs(r.hi - Fraction(a, q)))
    if worst > Fraction(1, q * Q):
        # the interval is too wide to certify; estimate the digits needed
        gap = Fraction(1, q * Q) - abs(r.value - Fraction(a, q))
        need = math.ceil(-math.log10(gap)) + 2 if gap > 0 else (r.digits or 0) + 10
        raise PrecisionError(f"cannot certify |alpha - {a}/{q}| <= 1/(qQ) at Q={Q}", required_digits=need)
    return RationalApprox(a, q, worst * q * q, math.gcd(a, q) == 1)


@dataclass(frozen=True)
class ReducedApprox:
    a_red: int  # a'
    n_red: int  # n'
    g: int
    approx: RationalApprox
    n_power: int

    @property
    def block_length(self) -> int:
        return self.n_red * self.approx.q


def reduce_against(approx: RationalApprox, n_power: int) -> ReducedApprox:
    """``a/(q N) = a'/(q N')`` with ``g = gcd(a, N)``, ``a' = a/g``, ``N' = N/g``."""
    if not approx.reduced:
        raise InvalidApproximationError("approximation must be reduced")
    g = math.gcd(approx.a, n_power)
    a_red, n_red = approx.a // g, n_power // g
    if math.gcd(a_red, n_red * approx.q) != 1:
        raise AssertionError("gcd(a', n' q) != 1 for a reduced approximation")
    return ReducedApprox(a_red, n_red, g, approx, n_power)


@dataclass(frozen=True)
class ConvergentRun:
    start: int | None
    stop: int | None  # exclusive
    undetermined: bool
    index_log_ratio: float | None  # largest index in the run / log(hi)

    @property
    def indices(self) -> range:
        return range(0) if self.start is None else range(self.start, self.stop)

    def __len__(self):
        return len(self.indices)


def find_convergents_in_range(cf: ContinuedFraction, lo, hi) -> ConvergentRun:
    """Maximal run of consecutive indices with ``|p_m|`` in ``[lo, hi]``."""
    if lo > hi:
        raise ValueError("lo > hi")
    best = (None, None)
    cur = None
    for m, p in enumerate(cf.p):
        if lo <= abs(p) <= hi:
            cur = m if cur is None else cur
            if best[0] is None or m + 1 - cur > best[1] - best[0]:
                best = (cur, m + 1)
        else:
            cur = None
    undetermined = not cf.complete and abs(cf.p[-1]) < hi
    ratio = None
    if best[0] is not None and hi > 1:
        ratio = (best[1] - 1) / math.log(hi)
    return ConvergentRun(best[0], best[1], undetermined, ratio)


@dataclass(frozen=True)
class GoodConvergent:
    m: int | None
    p: int | None
    q: int | None
    gcd: int | None
    run: ConvergentRun
    checked: tuple = field(default=())  # (m, gcd) for every scanned candidate

    @property
    def found(self) -> bool:
        return self.m is not None

    def __bool__(self):
        return self.found


def find_good_convergent(cf: ContinuedFraction, n: int, k: int, r: float, eps: float) -> GoodConvergent:
    """First convergent with ``p_m`` in ``[n**(r-eps), n**r]`` and ``gcd(p_m, n**(k-1)) <= n**eps``.

    Returns an object with ``found == False`` (and the scanned candidates) when
    there is none.
    """
    if not 0 < eps < r:
        raise ValueError("need 0 < eps < r")
    run = find_convergents_in_range(cf, n ** (r - eps), n**r)
    N = n ** (k - 1)
    limit = n**eps
    checked = []
    for m in run.indices:
        g = math.gcd(cf.p[m], N)
        checked.append((m, g))
        if g <= limit:
            return GoodConvergent(m, cf.p[m], cf.q[m], g, run, tuple(checked))
    return GoodConvergent(None, None, None, None, run, tuple(checked))


def f_n_alpha(cf: ContinuedFraction, n: int, k: int, use_numerators: bool = False) -> tuple[float, int]:
    """Minimum over ``m`` of ``n g_m / q_m + q_m / (n g_m)`` with ``g_m = gcd(p_m, n**(k-1))``.

    ``use_numerators`` replaces ``q_m`` by ``|p_m|``.  Returns ``(value, m)``.
    """
    N = n ** (k - 1)
    best = (math.inf, -1)
    for m in range(len(cf)):
        g = math.gcd(cf.p[m], N)
        d = abs(cf.p[m]) if use_numerators else cf.q[m]
        if d == 0:
            continue
        v = float(Fraction(n * g, d) + Fraction(d, n * g))
        if v < best[0]:
            best = (v, m)
    return best


def khinchin_levy_stat(cf: ContinuedFraction, m: int) -> mpmath.mpf:
    """``q_m ** (1/m)``."""
    if not 1 <= m < len(cf):
        raise ValueError(f"need 1 <= m < {len(cf)}")
    return mpmath.root(mpmath.mpf(cf.q[m]), m)


def quotient_growth_check(cf: ContinuedFraction, eps: float = 0.1, threshold: float = 1000.0) -> BoundReport:
    """``max_m a_m / m**(1+eps)`` over ``m >= 1``; flagged when it exceeds ``threshold``."""
    a = cf.quotients
    stats = [a[m] / m ** (1 + eps) for m in range(1, len(a))]
    if not stats:
        stats = [0.0]
    half = len(stats) // 2
    worst = max(stats)
    tail = max(stats[half:]) if stats[half:] else 0.0
    return BoundReport(
        "quotient-growth",
        worst,
        threshold,
        explicit=False,
        detail={"eps": eps, "argmax": 1 + stats.index(worst), "tail_max": tail, "flagged": worst > threshold},
    )
