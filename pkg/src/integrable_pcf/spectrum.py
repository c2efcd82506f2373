"""Eigenphases and trace sums of the quantised maps ``U_{n, alpha, beta}``.

The eigenphase of index ``k`` is ``theta_k = n * (alpha * phi(k/n) + beta * k/n) mod 1``
and all exponentials use ``e(x) = exp(2 pi i x)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import PrecisionError
from .polynomial import PolynomialPhase, validate_hypotheses
from .reals import Real, as_real
from .reduction import REDUCTION_BUDGET, DDPhases, ExactPhases

__all__ = [
    "IndexRange",
    "SpectrumParams",
    "TraceWindow",
    "eigenphases",
    "eigenphases_exact",
    "reduced_phases",
    "trace_power",
    "trace_window",
    "traces_from_phases",
]

TWO_PI = 2.0 * math.pi


class IndexRange(enum.Enum):
    ONE_TO_N = "OneToN"
    MINUS_N_TO_N = "MinusNToN"

    @classmethod
    def parse(cls, value) -> "IndexRange":
        if isinstance(value, cls):
            return value
        for member in cls:
            if value in (member.value, member.name, member.value.lower()):
                return member
        raise ValueError(f"unknown index range {value!r}")


@dataclass(frozen=True)
class SpectrumParams:
    n: int
    alpha: Real
    beta: Real
    index_range: IndexRange = IndexRange.ONE_TO_N

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "alpha", as_real(self.alpha))
        object.__setattr__(self, "beta", as_real(self.beta))
        object.__setattr__(self, "index_range", IndexRange.parse(self.index_range))

    @property
    def indices(self) -> np.ndarray:
        if self.index_range is IndexRange.ONE_TO_N:
            return np.arange(1, self.n + 1, dtype=np.int64)
        return np.arange(-self.n, self.n + 1, dtype=np.int64)

    @property
    def size(self) -> int:
        return self.n if self.index_range is IndexRange.ONE_TO_N else 2 * self.n + 1

    def with_n(self, n: int) -> "SpectrumParams":
        return SpectrumParams(n, self.alpha, self.beta, self.index_range)


@dataclass(frozen=True)
class TraceWindow:
    """``|Tr U_n^l|**2`` for ``-window <= l <= window``; ``values[window + l]`` is entry ``l``."""

    n: int
    window: int
    values: np.ndarray
    count: int
    traces: np.ndarray | None = field(default=None, repr=False)

    def __getitem__(self, ell: int) -> float:
        if abs(ell) > self.window:
            raise IndexError(f"l={ell} outside window {self.window}")
        return float(self.values[self.window + ell])

    @property
    def ells(self) -> np.ndarray:
        return np.arange(-self.window, self.window + 1)


def phase_error_bound(phase: PolynomialPhase, params: SpectrumParams) -> Fraction:
    """Bound on ``|theta_k - theta_k(true)|`` induced by the input radii."""
    n = params.n
    return n * phase.max_abs() * params.alpha.radius + n * params.beta.radius


def _check_precision(phase, params, ell_max: int):
    err = phase_error_bound(phase, params) * max(abs(ell_max), 1)
    if err >= REDUCTION_BUDGET:
        scale = err / max(params.alpha.radius, params.beta.radius)
        need = math.ceil(math.log10(scale * 2**60)) + 1
        raise PrecisionError(
            f"n={params.n}, |l|<={ell_max}: input precision gives phase error {float(err):.3g} "
            f"> 2**-60; need about {need} decimal digits",
            required_digits=need,
        )


def reduced_phases(phase: PolynomialPhase, params: SpectrumParams, method: str = "auto", ell_max: int = 1):
    """Phase engine for ``params``: :class:`ExactPhases` or :class:`DDPhases`.

    ``auto`` picks the exact engine for exact (rational) inputs and the
    double-double engine for decimal approximations.
    """
    _check_precision(phase, params, ell_max)
    if method == "auto":
        method = "exact" if params.alpha.exact and params.beta.exact else "dd"
    cls = {"exact": ExactPhases, "dd": DDPhases}.get(method)
    if cls is None:
        raise ValueError(f"unknown phase method {method!r}")
    return cls(phase.coeffs, params.alpha.value, params.beta.value, params.n, params.indices)


def eigenphases(phase: PolynomialPhase, params: SpectrumParams, method: str = "auto") -> np.ndarray:
    """Eigenphases in ``[0, 1)``, one per index of ``params.index_range``."""
    if not validate_hypotheses(phase, params).convex_ok:
        raise ValueError("phi'' vanishes on [-1, 1]")
    return reduced_phases(phase, params, method).phases()


def eigenphases_exact(phase: PolynomialPhase, params: SpectrumParams) -> list[Fraction]:
    return ExactPhases(phase.coeffs, params.alpha.value, params.beta.value, params.n, params.indices).fractions()


def trace_power(phase: PolynomialPhase, params: SpectrumParams, ell: int, method: str = "auto") -> complex:
    """``Tr U_n^l = sum_k e(l theta_k)``; negative ``l`` is the conjugate of ``|l|``."""
    ell = int(ell)
    eng = reduced_phases(phase, params, method, ell_max=abs(ell))
    t = complex(np.exp(TWO_PI * 1j * eng.multiple(abs(ell))).sum())
    return t.conjugate() if ell < 0 else t


def _rotation(theta: np.ndarray, L: int) -> np.ndarray:
    """``S_l = sum_k u_k**l`` for ``0 <= l <= L`` with ``u = e(theta)``.

    Powers are built by repeated multiplication: baby steps ``u**b`` for
    ``b < B`` and giant steps ``u**(aB)``; ``S_{aB+b}`` is then one row-column
    product, so the whole window is a single matrix multiplication.
    """
    u = np.exp(TWO_PI * 1j * theta)
    B = max(1, math.isqrt(L) + 1)
    A = L // B + 1
    baby = np.empty((B, u.size), dtype=np.complex128)
    baby[0] = 1.0
    for b in range(1, B):
        baby[b] = baby[b - 1] * u
    step = baby[B - 1] * u
    giant = np.empty((A, u.size), dtype=np.complex128)
    giant[0] = 1.0
    for a in range(1, A):
        giant[a] = giant[a - 1] * step
    return (giant @ baby.T).ravel()[: L + 1]


def traces_from_phases(theta: np.ndarray, L: int, method: str = "rotation", engine=None) -> np.ndarray:
    """Complex traces ``S_l`` for ``0 <= l <= L`` of an arbitrary phase set.

    ``direct`` sums ``e(l theta_k mod 1)`` separately for every ``l``, reducing
    through ``engine.multiple`` when a phase engine is supplied.
    """
    if method == "rotation":
        return _rotation(np.asarray(theta, dtype=np.float64), L)
    if method != "direct":
        raise ValueError(f"unknown trace method {method!r}")
    out = np.empty(L + 1, dtype=np.complex128)
    theta = np.asarray(theta, dtype=np.float64)
    for ell in range(L + 1):
        ph = engine.multiple(ell) if engine is not None else np.mod(ell * theta, 1.0)
        out[ell] = np.exp(TWO_PI * 1j * ph).sum()
    return out


def trace_window(
    phase: PolynomialPhase,
    params: SpectrumParams,
    L: int,
    method: str = "rotation",
    phase_method: str = "auto",
) -> TraceWindow:
    """``|Tr U_n^l|**2`` for ``|l| <= L``; ``rotation`` is the fast path."""
    if L < 0:
        raise ValueError("window must be nonnegative")
    eng = reduced_phases(phase, params, phase_method, ell_max=L)
    return window_from_engine(eng, params.n, L, method)


def window_from_engine(eng, n: int, L: int, method: str = "rotation") -> TraceWindow:
    theta = eng.phases()
    s = traces_from_phases(theta, L, method, engine=eng)
    s[0] = theta.size  # exact
    full = np.concatenate([np.conj(s[:0:-1]), s])
    vals = full.real**2 + full.imag**2
    return TraceWindow(n, L, vals, theta.size, full)
