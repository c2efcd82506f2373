"""Pair correlation of eigenphases.

The local statistic is

    rho_n(f) = n**-2 * sum_l fhat(l/n) |Tr U_n^l|**2,

and the cumulative one is the plain mean of ``rho_1 .. rho_N``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import UnsupportedKindError, WindowError
from .polynomial import PolynomialPhase
from .spectrum import IndexRange, SpectrumParams, TraceWindow, reduced_phases, window_from_engine

__all__ = [
    "TestKind",
    "TestFunction",
    "PcfValue",
    "CumulativePcf",
    "Decomposition",
    "ExactSum",
    "rho2_local",
    "rho2_at",
    "rho2_cumulative",
    "local_values",
    "poisson_reference",
    "pair_count_oracle",
    "oscillation_decomposition",
    "decompose",
]


class TestKind(enum.Enum):
    __test__ = False
    FEJER = "fejer"
    TRIANGLE_POWER = "triangle-power"
    USER_TABLE = "table"
    COMBINATION = "combination"


@dataclass(frozen=True)
class TestFunction:
    """Even test function given through its compactly supported transform ``fhat``.

    ``f_at_zero`` is ``f(0) = int fhat`` and ``fhat_at_zero`` is ``fhat(0) = int f``.
    ``f`` (the physical side) is only known in closed form for some kinds.
    """

    __test__ = False

    fhat: Callable[[np.ndarray], np.ndarray]
    support_radius: float
    f_at_zero: float
    fhat_at_zero: float
    kind: TestKind
    f: Callable[[np.ndarray], np.ndarray] | None = None
    breakpoints: tuple = ()
    params: dict = field(default_factory=dict, compare=False)

    @classmethod
    def fejer(cls, support: float = 1.0) -> "TestFunction":
        S = float(support)

        def fhat(t):
            return np.maximum(0.0, 1.0 - np.abs(np.asarray(t, dtype=float)) / S)

        def f(x):
            return S * np.sinc(S * np.asarray(x, dtype=float)) ** 2

        return cls(fhat, S, S, 1.0, TestKind.FEJER, f, (0.0,), {"support": S})

    @classmethod
    def triangle_power(cls, power: float, support: float = 1.0) -> "TestFunction":
        """``fhat(t) = max(0, 1 - |t|/S)**p``; ``p = 1`` is the Fejer pair."""
        S, p = float(support), float(power)
        if p == 1.0:
            return cls.fejer(S)

        def fhat(t):
            return np.maximum(0.0, 1.0 - np.abs(np.asarray(t, dtype=float)) / S) ** p

        def f(x):
            x = np.atleast_1d(np.asarray(x, dtype=float))
            out = [2 * integrate.quad(lambda t: (1 - t / S) ** p, 0, S, weight="cos", wvar=2 * math.pi * v)[0]
                   if v != 0 else 2 * S / (p + 1) for v in x]
            return np.array(out)

        return cls(fhat, S, 2 * S / (p + 1), 1.0, TestKind.TRIANGLE_POWER, f, (0.0,), {"power": p, "support": S})

    @classmethod
    def from_table(cls, t, values) -> "TestFunction":
        """Piecewise-linear ``fhat`` through ``(t_i, v_i)`` on ``t >= 0``, extended evenly.

        ``fhat`` vanishes beyond the last node.  A single node at ``t = 0`` gives
        the degenerate function supported at the origin.
        """
        t = np.asarray(t, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size == 0 or t[0] != 0 or np.any(np.diff(t) <= 0):
            raise ValueError("table needs increasing nodes starting at t = 0")
        S = float(t[-1])

        def fhat(x):
            a = np.abs(np.asarray(x, dtype=float))
            if S == 0.0:
                return np.where(a == 0, v[0], 0.0)
            return np.where(a <= S, np.interp(a, t, v), 0.0)

        integral = 2 * float(np.sum(0.5 * (v[1:] + v[:-1]) * np.diff(t))) if t.size > 1 else 0.0
        return cls(fhat, S, integral, float(v[0]), TestKind.USER_TABLE, None, tuple(t), {"nodes": t.size})

    @classmethod
    def from_csv(cls, path) -> "TestFunction":
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
        if rows and not _is_number(rows[0][0]):
            rows = rows[1:]
        return cls.from_table([float(r[0]) for r in rows], [float(r[1]) for r in rows])

    def scaled(self, c: float) -> "TestFunction":
        return self._combine(((c, self),))

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return self._combine(((1.0, self), (1.0, other)))

    def __rmul__(self, c: float) -> "TestFunction":
        return self.scaled(c)

    @staticmethod
    def _combine(terms) -> "TestFunction":
        terms = tuple((float(c), g) for c, g in terms)

        def fhat(x):
            return sum(c * g.fhat(x) for c, g in terms)

        f = None
        if all(g.f is not None for _, g in terms):
            def f(x):
                return sum(c * g.f(x) for c, g in terms)

        kind = terms[0][1].kind if len(terms) == 1 else TestKind.COMBINATION
        return TestFunction(
            fhat,
            max(g.support_radius for _, g in terms),
            sum(c * g.f_at_zero for c, g in terms),
            sum(c * g.fhat_at_zero for c, g in terms),
            kind,
            f,
            tuple(sorted(set().union(*(g.breakpoints for _, g in terms)))),
            {"terms": terms} if len(terms) > 1 else {**terms[0][1].params, "scale": terms[0][0]},
        )

    def required_window(self, n: int) -> int:
        return math.ceil(self.support_radius * n)

    def check(self, tol: float = 1e-8) -> float:
        """Verify ``f(0) = int fhat`` by quadrature; returns the discrepancy."""
        S = self.support_radius
        if S == 0:
            err = abs(self.f_at_zero)
        else:
            pts = [p for p in self.breakpoints if 0 < p < S] or None
            val = 2 * integrate.quad(lambda t: float(self.fhat(t)), 0, S, points=pts, limit=200,
                                     epsabs=1e-13, epsrel=1e-12)[0]
            err = abs(val - self.f_at_zero)
        if err > tol * max(1.0, abs(self.f_at_zero)):
            raise ValueError(f"f(0) inconsistent with int fhat (error {err:.3g})")
        if abs(float(self.fhat(0.0)) - self.fhat_at_zero) > tol:
            raise ValueError("fhat(0) inconsistent with stored value")
        return err


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


@dataclass(frozen=True)
class PcfValue:
    n: int
    value: float
    ell_window: int
    poisson_ref: float


@dataclass(frozen=True)
class CumulativePcf:
    N: int
    value: float
    per_n_values: tuple | None = None


@dataclass(frozen=True)
class Decomposition:
    N_m: int
    M: int
    rescale_term: float  # (N_m - M)/M * mean_{N_m}
    new_levels_term: float  # (1/M) * sum_{N_m < n <= M} rho_n
    total: float
    direct: float  # mean_M - mean_{N_m}
    identity_ok: bool


class ExactSum:
    """Running float sum with a single final rounding (Shewchuk partials, as in ``math.fsum``)."""

    def __init__(self):
        self._partials: list[float] = []
        self.count = 0

    def add(self, x: float):
        x = float(x)
        i = 0
        for y in self._partials:
            if abs(x) < abs(y):
                x, y = y, x
            hi = x + y
            lo = y - (hi - x)
            if lo:
                self._partials[i] = lo
                i += 1
            x = hi
        self._partials[i:] = [x]
        self.count += 1

    @property
    def value(self) -> float:
        return math.fsum(self._partials)


def poisson_reference(f: TestFunction) -> float:
    """Large-n mean of ``rho_n(f)`` for independent uniform phases: ``fhat(0) + f(0)``."""
    return f.fhat_at_zero + f.f_at_zero


def rho2_local(f: TestFunction, traces: TraceWindow) -> PcfValue:
    n = traces.n
    need = f.required_window(n)
    if traces.window < need:
        raise WindowError(f"window {traces.window} < required {need} for n={n}", required_window=need)
    W = min(traces.window, math.floor(f.support_radius * n))
    ells = np.arange(-W, W + 1)
    weights = f.fhat(ells / n)
    vals = traces.values[traces.window - W: traces.window + W + 1]
    value = math.fsum((weights * vals).tolist()) / n**2
    return PcfValue(n, value, traces.window, poisson_reference(f))


def rho2_at(f: TestFunction, phase: PolynomialPhase, params: SpectrumParams, phase_method="auto",
            trace_method="rotation") -> PcfValue:
    """Local statistic at ``params.n`` with the window sized from ``f``."""
    L = f.required_window(params.n)
    eng = reduced_phases(phase, params, phase_method, ell_max=L)
    return rho2_local(f, window_from_engine(eng, params.n, L, trace_method))


def local_values(f, phase, alpha, beta, ns, index_range=IndexRange.ONE_TO_N, phase_method="auto"):
    """Generator of :class:`PcfValue` for each ``n`` in ``ns``."""
    base = SpectrumParams(1, alpha, beta, index_range)
    for n in ns:
        yield rho2_at(f, phase, base.with_n(n), phase_method)


def rho2_cumulative(f, phase, alpha, beta, N: int, retain: bool = False,
                    index_range=IndexRange.ONE_TO_N, phase_method="auto") -> CumulativePcf:
    """Streaming mean of ``rho_n`` over ``n = 1 .. N``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    acc = ExactSum()
    kept = [] if retain else None
    for v in local_values(f, phase, alpha, beta, range(1, N + 1), index_range, phase_method):
        acc.add(v.value)
        if kept is not None:
            kept.append(v)
    return CumulativePcf(N, acc.value / N, tuple(kept) if retain else None)


def pair_count_oracle(f: TestFunction, phases, n: int, m_cutoff: int = 8) -> float:
    """Physical-side pair sum ``(1/n) sum_{j,k} sum_m f(n (theta_j - theta_k + m))``.

    Terms with ``|m| <= m_cutoff`` are summed directly; the remaining tail is
    added in closed form through the trigamma function, which is exact for the
    Fejer kernel whenever ``S * n`` is an integer.
    """
    if f.kind is not TestKind.FEJER:
        raise UnsupportedKindError(f"pair counting needs the Fejer pair, got {f.kind.value}")
    S = f.support_radius
    Sn = S * n
    if abs(Sn - round(Sn)) > 1e-12:
        raise UnsupportedKindError("pair counting needs S * n to be an integer")
    theta = np.asarray(phases, dtype=float)
    ms = np.arange(-m_cutoff, m_cutoff + 1, dtype=float)
    acc = ExactSum()
    for tj in theta:
        d = np.mod(tj - theta + 0.5, 1.0) - 0.5
        direct = f.f(n * (d[:, None] + ms[None, :])).sum()
        s2 = np.sin(math.pi * Sn * d) ** 2
        tail = s2 / (math.pi**2 * S * n**2) * (
            special.polygamma(1, m_cutoff + 1 + d) + special.polygamma(1, m_cutoff + 1 - d)
        )
        acc.add(direct)
        acc.add(tail.sum())
    return acc.value / n


def decompose(local: list[float], N_m: int, M: int, rtol: float = 1e-10) -> Decomposition:
    """Split ``mean_M - mean_{N_m}`` into its rescaling and new-level parts.

    ``local[n - 1]`` is ``rho_n``; an empty mean (``N_m = 0``) counts as 0.
    """
    if not 0 <= N_m < M <= len(local):
        raise ValueError("need 0 <= N_m < M <= len(local)")
    mean_Nm = math.fsum(local[:N_m]) / N_m if N_m else 0.0
    mean_M = math.fsum(local[:M]) / M
    first = (N_m - M) / M * mean_Nm
    second = math.fsum(local[N_m:M]) / M
    total = first + second
    direct = mean_M - mean_Nm
    scale = max(abs(direct), abs(first), abs(second), 1e-300)
    return Decomposition(N_m, M, first, second, total, direct, abs(total - direct) <= rtol * scale)


def oscillation_decomposition(f, phase, alpha, beta, N_m: int, M: int,
                              index_range=IndexRange.ONE_TO_N, phase_method="auto") -> Decomposition:
    if not N_m < M:
        raise ValueError("need N_m < M")
    local = [v.value for v in local_values(f, phase, alpha, beta, range(1, M + 1), index_range, phase_method)]
    return decompose(local, N_m, M)
