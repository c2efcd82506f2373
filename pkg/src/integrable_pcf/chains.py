"""Numerical walk through the estimates that bound ``rho_n(f)``.

Each chain evaluates, for one ``n``, every quantity that appears in the
argument and emits a :class:`BoundReport` per inequality.  Inequalities that
hold with an explicit constant are reported with ``explicit=True`` and must
hold; ``<<`` steps carry the measured ratio as a fitted constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diophantine import cf_expand, dirichlet_approx, f_n_alpha, find_good_convergent, reduce_against
from .errors import CostGuardError
from .pcf import TestFunction, rho2_local
from .polynomial import PolynomialPhase
from .reals import as_real
from .reduction import frac_linear
from .reports import BoundReport
from .spectrum import SpectrumParams, reduced_phases, window_from_engine
from .weyl import minsum_terms, representation_counts

__all__ = ["ChainResult", "quadratic_bound_chain", "general_bound_chain", "GENERAL_CHAIN_GUARD"]

# (max table size n**k, max k! n**k terms) for the general chain
GENERAL_CHAIN_GUARD = (5 * 10**7, 2 * 10**8)

_CHUNK = 1 << 22


@dataclass
class ChainResult:
    n: int
    rho: float
    exponent: float
    target: float
    reports: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def by_equation(self, name: str) -> BoundReport:
        for r in self.reports:
            if r.equation == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "rho": self.rho,
            "exponent": self.exponent,
            "target": self.target,
            "info": {k: (str(v) if isinstance(v, (Fraction, int)) and not isinstance(v, bool) and abs(v) >= 2**53 else v)
                     for k, v in self.info.items()},
            "reports": [r.to_dict() for r in self.reports],
        }


def _min_terms(c: Fraction, x: np.ndarray, cap: float, factor: float) -> np.ndarray:
    fr = frac_linear(c, x)
    d = np.minimum(fr, 1.0 - fr)
    with np.errstate(divide="ignore"):
        return np.where(d * factor * cap > 1.0, 1.0 / (factor * d), cap)


def _fsum(a) -> float:
    return math.fsum(np.asarray(a, dtype=float).tolist())


def _local_rho(phase, alpha, beta, n, f):
    params = SpectrumParams(n, alpha, beta)
    L = max(n, f.required_window(n))
    eng = reduced_phases(phase, params, ell_max=L)
    win = window_from_engine(eng, n, L)
    return rho2_local(f, win).value, win


def quadratic_bound_chain(phase: PolynomialPhase, alpha, beta, n: int, r: float = 1.5, eps: float = 0.1,
                          f: TestFunction | None = None) -> ChainResult:
    """Chain for a quadratic phase (target exponent 1/2 + eps)."""
    if phase.degree != 2:
        raise ValueError("quadratic chain needs a degree-2 phase")
    f = TestFunction.fejer() if f is None else f
    a_eff = as_real(alpha).scaled(phase.leading)  # leading coefficient of alpha * phi
    rho, _ = _local_rho(phase, alpha, beta, n, f)
    res = ChainResult(n, rho, math.log(rho) / math.log(n) if n > 1 and rho > 0 else 0.0, 0.5 + eps)
    rep = res.reports
    ne = n**eps

    # van der Corput: n^2 rho <= sum_l fhat(l/n) sum_{|h|<n} min(n - |h|, 1/(2||2 l h a/n||))
    ells = np.arange(-n, n + 1, dtype=np.int64)
    hs = np.arange(-(n - 1), n, dtype=np.int64)
    w = f.fhat(ells / n)
    prod = (ells[:, None] * hs[None, :]).ravel()
    inner = _min_terms(2 * a_eff.value / n, prod, float(n), 2.0).reshape(ells.size, hs.size)
    inner = np.minimum(inner, (n - np.abs(hs))[None, :])
    vdc = _fsum((w[:, None] * inner).ravel())
    rep.append(BoundReport("van-der-corput", n * n * rho, vdc, detail={"n": n}))

    # regroup the (l, h) double sum by x = l h
    hs4 = np.arange(-n, n + 1, dtype=np.int64)
    prod4 = (ells[:, None] * hs4[None, :]).ravel()
    double = _fsum(_min_terms(a_eff.value / n, prod4, 2.0 * n, 2.0))
    m_pos = minsum_terms(a_eff, n, 1, n * n, 2.0 * n)  # x = 1 .. n^2
    m4 = 2.0 * n + 2.0 * _fsum(m_pos)  # x in [-n^2, n^2]
    counts = representation_counts(n, 2)
    c_max = 2 * int(counts.max())
    zero_terms = (2 * n + 1) ** 2 - (2 * n) ** 2
    rep.append(BoundReport("squared-sum-multiplicity", double, zero_terms * 2.0 * n + c_max * (m4 - 2.0 * n),
                           detail={"c_max": c_max, "zero_terms": zero_terms}))
    rep.append(BoundReport("squared-sum", n * n * rho, n * n + ne * m4, explicit=False))

    # Dirichlet approximation and reduction against n
    Q = math.floor(n**r)
    approx = dirichlet_approx(a_eff, Q)
    red = reduce_against(approx, n)
    Lb = red.block_length
    res.info["cap_hits"] = int(np.count_nonzero(m_pos == 2.0 * n))
    res.info.update({"Q": Q, "a": approx.a, "q": approx.q, "a_red": red.a_red, "n_red": red.n_red,
                     "gcd_a_n": red.g, "block_length": Lb})
    rep.append(BoundReport("dirichlet", float(approx.remainder_bound), 1.0, detail={"q": approx.q, "Q": Q}))
    rep.append(BoundReport("residue-system", math.gcd(red.a_red, Lb), 1, exact=True))

    # blocks of length n' q over x = 1 .. n^2
    starts = np.arange(0, n * n, Lb)
    block_sums = np.add.reduceat(m_pos, starts) if m_pos.size else np.zeros(1)
    nb = starts.size
    rep.append(BoundReport("block-count", 2 * nb - 1, 2 * (n * n // Lb) + 2, exact=True))
    rep.append(BoundReport("blocked-sum", m4, 2.0 * n + 2.0 * nb * float(block_sums.max())))
    rep.append(BoundReport("block-sum", float(block_sums.max()), n * n + Lb * math.log(max(Lb, 2)), explicit=False))
    bracket = n * n + Lb * math.log(max(Lb, 2))
    rep.append(BoundReport("sum-bound", ne * m4, (n ** (2 + eps) / Lb + 1) * bracket, explicit=False))
    rep.append(BoundReport("rho-bound", rho, 1 + (ne / Lb + n**-2.0) * bracket, explicit=False))
    rep.append(BoundReport("final", rho, ne * (n ** (2 - r) + n ** (r - 1)), explicit=False, detail={"r": r}))

    # the beta shift does not change |sum_x e(l h (a x / n + beta))|
    b = as_real(beta).value
    xs = np.arange(1, 2 * n + 1, dtype=np.int64)
    worst = 0.0
    for ell, h in ((1, 1), (2, n // 2 + 1), (n, n - 1), (3, 7)):
        t0 = np.exp(2j * math.pi * frac_linear(ell * h * a_eff.value / n, xs)).sum()
        t1 = np.exp(2j * math.pi * frac_linear(ell * h * a_eff.value / n, xs, ell * h * b)).sum()
        worst = max(worst, abs(abs(t0) - abs(t1)))
    rep.append(BoundReport("beta-cancellation", worst, 1e-9))
    rep.append(BoundReport("exponent", res.exponent, res.target, explicit=False,
                           detail={"target_eps_0.05": 0.55, "target_eps_0.2": 0.7}))
    return res


def general_bound_chain(phase: PolynomialPhase, alpha, beta, n: int, r: float = 0.5, eps: float = 0.1,
                        f: TestFunction | None = None, guard=GENERAL_CHAIN_GUARD) -> ChainResult:
    """Chain for degree ``3 <= k <= 5`` (target exponent ``1 - 2/K + eps``, ``K = 2**(k-1)``)."""
    k = phase.degree
    if not 3 <= k <= 5:
        raise ValueError("general chain needs 3 <= degree <= 5")
    if n**k + 1 > guard[0] or math.factorial(k) * n**k > guard[1]:
        raise CostGuardError(f"n={n} too large for degree {k} (guard {guard})")
    f = TestFunction.fejer() if f is None else f
    K = 2 ** (k - 1)
    a_eff = as_real(alpha).scaled(phase.leading)
    rho, win = _local_rho(phase, alpha, beta, n, f)
    target = 1 - 2 / K + eps
    res = ChainResult(n, rho, math.log(rho) / math.log(n) if n > 1 and rho > 0 else 0.0, target)
    rep = res.reports
    ne = n**eps

    # Hoelder / power mean over the 2n + 1 values of l
    t2 = np.array([win[ell] for ell in range(-n, n + 1)])
    mean_pow = _fsum((t2 / n) ** (K / 2)) / (2 * n + 1)
    holder = (2 * n + 1) / n * mean_pow ** (2 / K)
    rep.append(BoundReport("holder", rho, holder, detail={"rho^(K/2)": rho ** (K / 2), "majorant^(K/2)": holder ** (K / 2)}))

    # Weyl differencing with j = k - 1 and the linear-sum bound on each inner sum
    counts = representation_counts(n, k, max_size=guard[0])
    ys = np.nonzero(counts)[0].astype(np.int64)
    ys = ys[ys > 0]
    c_step = math.factorial(k) * a_eff.value / n ** (k - 1)
    w9p = 0.0
    for lo in range(0, ys.size, _CHUNK):
        y = ys[lo: lo + _CHUNK]
        w9p += _fsum(counts[y] * _min_terms(c_step, y, float(n), 1.0))
    w9p *= 2**k
    zero_terms = (2 * n + 1) ** k - (2 * n) ** k
    w9 = zero_terms * n + w9p
    lhs_k = _fsum(t2 ** (K / 2))
    rep.append(BoundReport("weyl-power-sum", lhs_k, (2 * n) ** (K - k) * w9, detail={"j": k - 1}))
    rep.append(BoundReport("zero-terms", zero_terms, n ** (k - 1), explicit=False))
    rep.append(BoundReport("differenced-sum", rho ** (K / 2), n ** (K / 2 - k - 1) * w9, explicit=False))

    # regroup by x = k! h_1 ... h_{k-1} l
    X = math.factorial(k) * n**k
    m10 = 0.0
    c10 = a_eff.value / n ** (k - 1)
    for lo in range(1, X + 1, _CHUNK):
        x = np.arange(lo, min(X, lo + _CHUNK - 1) + 1, dtype=np.int64)
        m10 += _fsum(_min_terms(c10, x, float(n), 1.0))
    c_max = 2 ** (k - 1) * int(counts.max())
    rep.append(BoundReport("product-multiplicity", w9p, 2.0 * c_max * m10, detail={"c_max": c_max}))
    rep.append(BoundReport("multiplicity-growth", c_max, ne, explicit=False))
    rep.append(BoundReport("product-sum", rho ** (K / 2), n ** (K / 2 - k - 1 + eps) * (n**k + m10), explicit=False))

    # convergent with small gcd against n^(k-1)
    cf = cf_expand(a_eff)
    good = find_good_convergent(cf, n, k, r, eps)
    if good:
        m, a, q, g = good.m, good.p, good.q, good.gcd
        fallback = False
    else:
        _, m = f_n_alpha(cf, n, k)
        a, q, g = cf.p[m], cf.q[m], math.gcd(cf.p[m], n ** (k - 1))
        fallback = True
    nk = n ** (k - 1) // g
    res.info.update({"m": m, "p_m": a, "q_m": q, "gcd": g, "n_k": nk, "fallback": fallback,
                     "run": list(good.run.indices)})
    qn = q * nk
    rep.append(BoundReport("product-block-sum", m10, (n**k / qn + 1) * (n**k + qn * math.log(max(qn, 2))),
                           explicit=False, detail={"fallback": fallback}))
    rep.append(BoundReport("convergent-split", rho ** (K / 2), n ** (K / 2 - k - 1 + eps) * (n**k + n ** (2 * k) / qn + qn),
                           explicit=False))
    balance = n * g / q + q / (n * g)
    rep.append(BoundReport("rho-balance", rho, n**target * (1 + balance) ** (2 / K), explicit=False))
    rep.append(BoundReport("balance-terms", balance, n ** (1 + eps - r) + n ** (r - 1), explicit=False, detail={"r": r}))
    rep.append(BoundReport("exponent", res.exponent, target, explicit=False,
                           detail={"target_eps_0.05": 1 - 2 / K + 0.05, "target_eps_0.2": 1 - 2 / K + 0.2}))
    return res
