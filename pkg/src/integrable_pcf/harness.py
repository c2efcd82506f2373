"""Seeded Monte-Carlo sweeps over (alpha, beta), gap studies and exponent fits.

Every sample draws its parameters from ``SeedSequence(seed, spawn_key=(i,))``
so a record depends only on the configuration and its index, never on the
worker count.  Worker tasks are pure functions of ``(config, index)``.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import PCFError, PrecisionError
from .pcf import ExactSum, TestFunction, decompose, local_values, poisson_reference
from .polynomial import PolynomialPhase
from .reals import as_real, golden_ratio

__all__ = [
    "SweepConfig",
    "SweepRecord",
    "run_sweep",
    "subsequence",
    "gap_study",
    "exponent_study",
    "parse_testfn",
    "write_records_csv",
    "write_json",
    "fmt",
]


def fmt(x) -> str:
    """17 significant digits for floats; exact integers and fractions as strings."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return str(x)
    if x is None:
        return ""
    return format(float(x), ".17g")


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        v = int(v)
        return str(v) if abs(v) >= 2**53 else v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        # round-trip through 17 significant digits; non-finite values become strings
        return float(format(v, ".17g")) if math.isfinite(v) else str(v)
    return str(v)


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def parse_testfn(text) -> TestFunction:
    """``"fejer"``, ``"fejer:S"``, ``"triangle:p[:S]"`` or ``"table:<path>"``."""
    if isinstance(text, TestFunction):
        return text
    name, _, rest = str(text).partition(":")
    if name == "fejer":
        return TestFunction.fejer(float(rest) if rest else 1.0)
    if name == "triangle":
        parts = rest.split(":")
        return TestFunction.triangle_power(float(parts[0]), float(parts[1]) if len(parts) > 1 else 1.0)
    if name == "table":
        return TestFunction.from_csv(rest)
    raise ValueError(f"unknown test function {text!r}")


@dataclass(frozen=True)
class SweepConfig:
    """Sweep configuration; see ``from_dict`` for the file schema."""

    phi: tuple
    testfn: str = "fejer"
    T: float = 1.0
    domain: str = "symmetric"  # [-T, T]^2, or "positive" for [0, T]^2
    samples: int = 1
    N_grid: tuple = (100,)
    seed: int = 0
    workers: int = 1
    epsilon: float = 0.1
    subsequence: bool = False
    alpha: object = None  # fixed alpha / beta override the random draw
    beta: object = None
    index_range: str = "OneToN"
    phase_method: str = "auto"
    n_grid: tuple = ()
    poison: tuple = ()  # sample indices forced to fail (failure-isolation testing)

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(self.phi))
        object.__setattr__(self, "N_grid", tuple(int(x) for x in self.N_grid))
        object.__setattr__(self, "n_grid", tuple(int(x) for x in self.n_grid))
        object.__setattr__(self, "poison", tuple(int(x) for x in self.poison))
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.N_grid or any(b <= a for a, b in zip(self.N_grid, self.N_grid[1:])) or self.N_grid[0] < 1:
            raise ValueError("N_grid must be a strictly increasing list of positive integers")
        if self.domain not in ("symmetric", "positive"):
            raise ValueError("domain must be 'symmetric' or 'positive'")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def phase(self) -> PolynomialPhase:
        return PolynomialPhase(self.phi)

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        d = dict(d)
        if isinstance(d.get("phi"), str):
            d["phi"] = PolynomialPhase.from_string(d["phi"]).coeffs
        d["phi"] = tuple(str(c) if isinstance(c, Fraction) else c for c in d["phi"])
        if "domain" in d and isinstance(d["domain"], dict):
            dom = d.pop("domain")
            d["T"] = dom.get("T", 1.0)
            d["domain"] = dom.get("kind", "symmetric")
        if "N_grid" not in d and "N" in d:
            d["N_grid"] = [d.pop("N")]
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "SweepConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["phi"] = [str(Fraction(c)) if not isinstance(c, str) else c for c in self.phi]
        return d


@dataclass
class SweepRecord:
    index: int
    alpha: float
    beta: float
    N: tuple
    rhobar: tuple
    sqdev: tuple
    ok: bool = True
    error: str = ""
    local: tuple | None = None


def _draw(config: SweepConfig, index: int):
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(index,)))
    lo = -config.T if config.domain == "symmetric" else 0.0
    a, b = rng.uniform(lo, config.T, size=2)
    alpha = float(a) if config.alpha is None else config.alpha
    beta = float(b) if config.beta is None else config.beta
    return alpha, beta


def _sample_task(args) -> SweepRecord:
    config, index, keep_local = args
    alpha, beta = _draw(config, index)
    fa, fb = float(as_real(alpha)), float(as_real(beta))
    try:
        if index in config.poison:
            raise PrecisionError("forced failure (poisoned sample)", required_digits=0)
        f = parse_testfn(config.testfn)
        ref = poisson_reference(f)
        acc = ExactSum()
        grid = set(config.N_grid)
        rhobar, sq, local = [], [], []
        for v in local_values(f, config.phase, alpha, beta, range(1, config.N_grid[-1] + 1),
                              config.index_range, config.phase_method):
            acc.add(v.value)
            if keep_local:
                local.append(v.value)
            if v.n in grid:
                r = acc.value / v.n
                rhobar.append(r)
                sq.append((r - ref) ** 2)
        return SweepRecord(index, fa, fb, config.N_grid, tuple(rhobar), tuple(sq),
                           local=tuple(local) if keep_local else None)
    except (PCFError, ValueError, ArithmeticError) as exc:
        return SweepRecord(index, fa, fb, config.N_grid, (), (), ok=False, error=f"{type(exc).__name__}: {exc}")


def _map(tasks, workers: int):
    if workers <= 1:
        return [_sample_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sample_task, tasks))  # ordered by sample index


def _slope(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    good = np.isfinite(x) & np.isfinite(y)
    if good.sum() < 2:
        return float("nan")
    return float(np.polyfit(x[good], y[good], 1)[0])


def run_sweep(config: SweepConfig, keep_local: bool = False, workers: int | None = None):
    """Returns ``(records, summary)``.

    The summary holds, per ``N``, the mean of ``|rhobar_N - ref|**2`` over the
    valid samples with its standard error, plus log-log slopes against ``N``
    and against ``(log N)**2 / N``.
    """
    workers = config.workers if workers is None else workers
    records = _map([(config, i, keep_local) for i in range(config.samples)], workers)
    ok = [r for r in records if r.ok]
    ref = poisson_reference(parse_testfn(config.testfn))
    per_N = []
    for j, N in enumerate(config.N_grid):
        sq = np.array([r.sqdev[j] for r in ok])
        dev = np.array([abs(r.rhobar[j] - ref) for r in ok])
        mean = float(sq.mean()) if sq.size else float("nan")
        se = float(sq.std(ddof=1) / math.sqrt(sq.size)) if sq.size > 1 else float("nan")
        per_N.append({"N": N, "variance": mean, "stderr": se, "median_abs_dev": float(np.median(dev)) if dev.size else float("nan")})
    Ns = np.array(config.N_grid, float)
    var = np.array([p["variance"] for p in per_N])
    with np.errstate(divide="ignore", invalid="ignore"):
        logv = np.log(var)
        shape = np.log(np.log(Ns) ** 2 / Ns)
    summary = {
        "config": config.to_dict(),
        "poisson_reference": ref,
        "samples_ok": len(ok),
        "samples_failed": len(records) - len(ok),
        "failures": [{"index": r.index, "error": r.error} for r in records if not r.ok],
        "per_N": per_N,
        "slope_vs_N": _slope(np.log(Ns), logv),
        "slope_vs_logN2_over_N": _slope(shape, logv),
        "variance_strictly_decreasing": bool(np.all(np.diff(var) < 0)),
    }
    return records, summary


def write_records_csv(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sample", "alpha", "beta", "ok", "N", "rhobar", "sqdev", "error"])
        for r in records:
            if not r.ok:
                w.writerow([r.index, fmt(r.alpha), fmt(r.beta), "false", "", "", "", r.error])
                continue
            for N, rb, sq in zip(r.N, r.rhobar, r.sqdev):
                w.writerow([r.index, fmt(r.alpha), fmt(r.beta), "true", N, fmt(rb), fmt(sq), ""])


def subsequence(m: int) -> int:
    """``N_m = floor(m (log m)**4)`` (0 for ``m = 1``)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    # float log is safe: the distance of m (log m)^4 to an integer is far above rounding error here
    return math.floor(m * math.log(m) ** 4)


def gap_study(config: SweepConfig, m_range, workers: int | None = None) -> dict:
    """Oscillation of the cumulative mean inside ``(N_m, N_{m+1}]``.

    For every evaluated ``M`` the decomposition identity is checked, and the
    oscillation is compared with the triangle-inequality bound
    ``(M - N_m)(rhobar_{N_m} + max local rho)/M`` and with the shape
    ``(log m)**4 max(rho)/M``.
    """
    ms = list(m_range)
    if not ms or ms[0] < 1:
        raise ValueError("m_range must be a nonempty range of positive integers")
    Nmax = subsequence(ms[-1] + 1)
    cfg = SweepConfig.from_dict({**config.to_dict(), "N_grid": [max(1, Nmax)]})
    records, _ = run_sweep(cfg, keep_local=True, workers=workers)
    out = []
    for rec in records:
        if not rec.ok:
            out.append({"sample": rec.index, "ok": False, "error": rec.error})
            continue
        local = list(rec.local)
        rows = []
        for m in ms:
            Nm, Nn = subsequence(m), subsequence(m + 1)
            if Nn <= Nm:
                rows.append({"m": m, "N_m": Nm, "N_m1": Nn, "empty": True})
                continue
            base = math.fsum(local[:Nm]) / Nm if Nm else 0.0
            osc, ratio_bound, ratio_shape, ident = 0.0, 0.0, 0.0, True
            window_max = max(local[Nm:Nn])
            for M in range(Nm + 1, Nn + 1):
                d = decompose(local, Nm, M)
                ident &= d.identity_ok
                diff = abs(d.direct)
                bound = (M - Nm) * (base + window_max) / M
                shape = math.log(max(m, 2)) ** 4 * window_max / M
                osc = max(osc, diff)
                ratio_bound = max(ratio_bound, diff / bound if bound else 0.0)
                ratio_shape = max(ratio_shape, diff / shape if shape else 0.0)
            rows.append({"m": m, "N_m": Nm, "N_m1": Nn, "rhobar_Nm": base, "max_oscillation": osc,
                         "relative_oscillation": osc / base if base else None, "bound_ratio": ratio_bound,
                         "shape_ratio": ratio_shape, "identity_ok": ident, "max_local": window_max})
        out.append({"sample": rec.index, "alpha": rec.alpha, "beta": rec.beta, "ok": True, "rows": rows})
    return {"config": cfg.to_dict(), "m_range": [ms[0], ms[-1]], "samples": out}


def _target_exponent(degree: int, eps: float) -> float:
    K = 2 ** (degree - 1)
    return 0.5 + eps if degree == 2 else 1 - 2 / K + eps


def _alphas(selection: str, config: SweepConfig, count: int, path=None):
    if selection == "golden":
        return [("golden", golden_ratio())]
    if selection == "random":
        return [(f"random-{i}", _draw(config, i)[0]) for i in range(count)]
    if selection == "file":
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        out = []
        for ln in lines:
            text, _, prec = ln.partition(",")
            out.append((text, as_real(text, int(prec) if prec else None)))
        return out
    raise ValueError(f"unknown alpha selection {selection!r}")


def exponent_study(config: SweepConfig, alpha_selection: str = "random", n_grid=None, count: int | None = None,
                   path=None, beta=None) -> dict:
    """Fit ``log rho_n`` against ``log n`` for each selected alpha."""
    ns = list(n_grid if n_grid is not None else config.n_grid)
    if len(ns) < 2 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_grid must be increasing with at least two points")
    f = parse_testfn(config.testfn)
    phase = config.phase
    target = _target_exponent(phase.degree, config.epsilon)
    beta = (config.beta if config.beta is not None else 0) if beta is None else beta
    rows = []
    for label, alpha in _alphas(alpha_selection, config, count or config.samples, path):
        vals = [v.value for v in local_values(f, phase, alpha, beta, ns, config.index_range, config.phase_method)]
        with np.errstate(divide="ignore"):
            slope = _slope(np.log(ns), np.log(vals))
        rows.append({"alpha": label if alpha_selection != "random" else float(as_real(alpha)),
                     "n": ns, "rho": vals, "exponent": slope, "target": target,
                     "within_target": bool(slope <= target), "log_rho_over_log_n": [
                         math.log(v) / math.log(n) if v > 0 and n > 1 else None for n, v in zip(ns, vals)]})
    exps = [r["exponent"] for r in rows]
    return {"config": config.to_dict(), "selection": alpha_selection, "degree": phase.degree, "target": target,
            "rows": rows, "median_exponent": float(np.median(exps)), "max_exponent": float(np.max(exps))}


def write_outputs(out_dir, name: str, summary: dict, records=None):
    os.makedirs(out_dir, exist_ok=True)
    write_json(os.path.join(out_dir, f"{name}.json"), summary)
    if records is not None:
        write_records_csv(os.path.join(out_dir, f"{name}.csv"), records)
