"""Measured-versus-bound records."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

SLACK = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """One inequality ``lhs <= rhs``.

    For bounds with an explicit constant ``holds`` is decided with a relative
    slack of 1e-12 plus the absolute rounding allowance ``atol`` (exactly when
    ``exact`` is set).  For ``<<`` bounds ``rhs`` is
    the bound without its hidden constant: ``holds`` is ``None`` and ``ratio``
    is the fitted constant.
    """

    equation: str
    lhs: float | int
    rhs: float | int
    explicit: bool = True
    exact: bool = False
    detail: dict = field(default_factory=dict)
    atol: float = 0.0

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else float("inf")
        if isinstance(self.lhs, int) and isinstance(self.rhs, int):
            return float(Fraction(self.lhs, self.rhs))
        return float(self.lhs) / float(self.rhs)

    @property
    def fitted_constant(self) -> float | None:
        return None if self.explicit else self.ratio

    @property
    def holds(self) -> bool | None:
        if not self.explicit:
            return None
        if self.exact:
            return self.lhs <= self.rhs
        return float(self.lhs) <= float(self.rhs) * (1 + SLACK) + SLACK * (self.rhs == 0) + self.atol

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, int) and not isinstance(v, bool) and abs(v) >= 2**53:
                return str(v)
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        return {
            "equation": self.equation,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "explicit": self.explicit,
            "holds": self.holds,
            "ratio": self.ratio,
            "fitted_constant": self.fitted_constant,
            "detail": enc(self.detail),
        }
