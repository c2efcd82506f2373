"""Exact and interval-certified real inputs.

Every real parameter (the scalars alpha and beta, the value whose continued
fraction is expanded, ...) enters the package as a :class:`Real`: an exact
rational centre plus a rational radius.  Exact inputs have radius 0.  A decimal
string with a declared precision ``p`` is read as the rational with
denominator ``10**p`` and radius ``10**-p``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import mpmath

__all__ = ["Real", "as_real", "golden_ratio", "sqrt_real"]

MIN_DECLARED_DIGITS = 50

_DECIMAL = re.compile(r"^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$")


@dataclass(frozen=True)
class Real:
    """A real number known to lie in ``[value - radius, value + radius]``."""

    value: Fraction
    radius: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @property
    def exact(self) -> bool:
        return self.radius == 0

    @property
    def lo(self) -> Fraction:
        return self.value - self.radius

    @property
    def hi(self) -> Fraction:
        return self.value + self.radius

    @property
    def digits(self) -> int | None:
        """Decimal digits certified by the radius (``None`` when exact)."""
        if self.exact:
            return None
        return max(0, -math.floor(math.log10(self.radius)))

    @classmethod
    def from_decimal(cls, text: str, precision: int | None = None) -> "Real":
        """Parse a decimal string.

        Without ``precision`` the string is taken at face value (exact).  With
        ``precision`` the value is truncated to ``precision`` fractional digits
        and carries radius ``10**-precision``.
        """
        m = _DECIMAL.match(text)
        if not m or not (m.group(2) or m.group(3)):
            raise ValueError(f"not a decimal number: {text!r}")
        value = Fraction(text.strip())
        if precision is None:
            return cls(value)
        if precision < MIN_DECLARED_DIGITS:
            raise ValueError(
                f"declared precision must be at least {MIN_DECLARED_DIGITS} digits, got {precision}"
            )
        scale = 10**precision
        num = math.floor(value * scale) if value >= 0 else -math.floor(-value * scale)
        return cls(Fraction(num, scale), Fraction(1, scale))

    def __float__(self) -> float:
        return float(self.value)

    def __neg__(self) -> "Real":
        return Real(-self.value, self.radius)

    def scaled(self, c) -> "Real":
        c = Fraction(c)
        return Real(self.value * c, self.radius * abs(c))


def as_real(x, precision: int | None = None) -> Real:
    """Coerce ints, Fractions, floats, ``"a/b"`` or decimal strings to :class:`Real`.

    Floats are converted exactly (they are dyadic rationals).
    """
    if isinstance(x, Real):
        return x
    if isinstance(x, (Integral, Rational)):
        return Real(Fraction(x))
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite real")
        return Real(Fraction(x))
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return Real(Fraction(man) * Fraction(2) ** exp)
    if isinstance(x, str):
        if "/" in x:
            return Real(Fraction(x.strip()))
        return Real.from_decimal(x, precision)
    raise TypeError(f"cannot interpret {type(x).__name__} as a real")


def _mp_real(value, digits):
    # 5 guard digits keep truncation + rounding error inside the 10**-digits radius
    with mpmath.workdps(digits + 30):
        v = mpmath.mpf(value() if callable(value) else value)
        whole = len(str(int(abs(v)))) if abs(v) >= 1 else 1
        s = mpmath.nstr(v, digits + 5 + whole, strip_zeros=False)
    return Real.from_decimal(s, precision=digits)


def golden_ratio(digits: int = 60) -> Real:
    return _mp_real(lambda: mpmath.phi, digits)


def sqrt_real(n: int, digits: int = 60) -> Real:
    return _mp_real(lambda: mpmath.sqrt(n), digits)
