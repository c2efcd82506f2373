"""Command line entry points (``python -m integrable_pcf <command> ...``)."""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import diophantine as dio
from .chains import general_bound_chain, quadratic_bound_chain
from .errors import PCFError
from .harness import SweepConfig, exponent_study, fmt, gap_study, parse_testfn, run_sweep, write_json, write_outputs
from .pcf import ExactSum, local_values, poisson_reference
from .polynomial import PolynomialPhase
from .reals import as_real, golden_ratio, sqrt_real
from .spectrum import IndexRange, SpectrumParams, trace_window


def parse_real(text: str, precision: int | None = None):
    """``golden``, ``sqrt:N``, ``a/b`` or a decimal (interval when ``precision`` is given)."""
    text = text.strip()
    digits = precision or 60
    if text == "golden":
        return golden_ratio(digits)
    if text.startswith("sqrt:"):
        return sqrt_real(int(text[5:]), digits)
    return as_real(text, precision)


def _emit(obj, out):
    if out:
        write_json(out, obj)
    else:
        json.dump(obj, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")


def cmd_spectrum(a):
    phase = PolynomialPhase.from_string(a.phi)
    params = SpectrumParams(a.n, parse_real(a.alpha, a.precision), parse_real(a.beta, a.precision),
                            IndexRange.parse(a.index_range))
    win = trace_window(phase, params, a.window)
    fh = open(a.out, "w", newline="") if a.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["ell", "re_trace", "im_trace", "abs2"])
    for ell, t, v in zip(win.ells, win.traces, win.values):
        w.writerow([int(ell), fmt(t.real), fmt(t.imag), fmt(v)])
    if a.out:
        fh.close()


def cmd_pcf(a):
    phase = PolynomialPhase.from_string(a.phi)
    f = parse_testfn(a.testfn)
    ref = poisson_reference(f)
    alpha, beta = parse_real(a.alpha, a.precision), parse_real(a.beta, a.precision)
    ir = IndexRange.parse(a.index_range)
    rows = []
    if a.cumulative_N:
        acc = ExactSum()
        for v in local_values(f, phase, alpha, beta, range(1, a.cumulative_N + 1), ir):
            acc.add(v.value)
            rows.append((v.n, acc.value / v.n))
    else:
        for v in local_values(f, phase, alpha, beta, a.n, ir):
            rows.append((v.n, v.value))
    fh = open(a.out, "w", newline="") if a.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "rho2", "poisson_ref", "abs_err"])
    for n, r in rows:
        w.writerow([n, fmt(r), fmt(ref), fmt(abs(r - ref))])
    if a.out:
        fh.close()


def _cf_report(cf, a):
    out = {"quotients": [str(x) for x in cf.quotients], "p": [str(x) for x in cf.p], "q": [str(x) for x in cf.q],
           "complete": cf.complete, "truncated": cf.truncated}
    if a.report == "identities":
        checks = []
        for m in range(1, len(cf)):
            for k in range(1, m + 1):
                lhs, rhs = dio.cross_determinant_check(cf, m, k)
                checks.append({"m": m, "k": k, "lhs": str(lhs), "rhs": str(rhs)})
        out["cross_determinants"] = checks
    elif a.report == "levy":
        m = min(a.terms, len(cf)) - 1
        out["levy"] = {"m": m, "q_m^(1/m)": float(dio.khinchin_levy_stat(cf, m)) if m >= 1 else None,
                       "reference": dio.LEVY_CONSTANT}
    elif a.report == "growth":
        out["growth"] = dio.quotient_growth_check(cf, a.epsilon).to_dict()
    elif a.report == "fn":
        val, m = dio.f_n_alpha(cf, a.n, a.k)
        out["fn"] = {"value": val, "m": m}
    if a.n and a.k:
        out["gcd_profile"] = [[m, str(g)] for m, g in dio.gcd_profile(cf, a.n, a.k)]
    return out


def cmd_cf(a):
    if a.value is not None:
        cf = dio.cf_expand(parse_real(a.value, a.precision), max_terms=a.terms)
        _emit(_cf_report(cf, a), a.out)
        return
    rng = np.random.default_rng(np.random.SeedSequence(a.seed))
    results = []
    for _ in range(a.random_samples):
        digits = "".join(str(d) for d in rng.integers(0, 10, size=a.digits))
        cf = dio.cf_expand(as_real("0." + digits, a.digits), max_terms=a.terms)
        results.append(_cf_report(cf, a))
    summary = {"samples": results}
    if a.report == "levy":
        vals = [r["levy"]["q_m^(1/m)"] for r in results if r["levy"]["q_m^(1/m)"] is not None]
        summary["mean"] = float(np.mean(vals)) if vals else None
        summary["reference"] = dio.LEVY_CONSTANT
    _emit(summary, a.out)


def cmd_weyl(a):
    phase = PolynomialPhase.from_string(a.phi)
    alpha, beta = parse_real(a.alpha, a.precision), parse_real(a.beta, a.precision)
    chain = quadratic_bound_chain if a.chain == "quadratic" else general_bound_chain
    r = a.r if a.r is not None else (1.5 if a.chain == "quadratic" else 0.5)
    out = [chain(phase, alpha, beta, n, r=r, eps=a.epsilon).to_dict() for n in a.n_grid]
    _emit({"chain": a.chain, "r": r, "epsilon": a.epsilon, "results": out}, a.out)


# study-specific keys; one config file may serve all three commands
STUDY_KEYS = ("m_range", "alpha_selection", "alpha_file", "count")


def _load_config(a):
    with open(a.config) as fh:
        d = json.load(fh)
    extra = {k: d.pop(k) for k in STUDY_KEYS if k in d}
    if a.seed is not None:
        d["seed"] = a.seed
    if a.workers is not None:
        d["workers"] = a.workers
    return SweepConfig.from_dict(d), extra


def cmd_sweep(a):
    cfg, _ = _load_config(a)
    records, summary = run_sweep(cfg)
    write_outputs(a.out_dir, "sweep", summary, records)


def cmd_gaps(a):
    cfg, extra = _load_config(a)
    lo, hi = extra.get("m_range", [a.m_min, a.m_max])
    write_outputs(a.out_dir, "gaps", gap_study(cfg, range(lo, hi + 1)))


def cmd_exponents(a):
    cfg, extra = _load_config(a)
    sel = a.alpha_selection or extra.get("alpha_selection", "random")
    report = exponent_study(cfg, sel, count=extra.get("count"), path=a.alpha_file or extra.get("alpha_file"))
    write_outputs(a.out_dir, "exponents", report)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="integrable-pcf", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--phi", required=True, help="coefficients, highest degree first, e.g. 1,0,0")
        sp.add_argument("--alpha", default="0")
        sp.add_argument("--beta", default="0")
        sp.add_argument("--precision", type=int, default=None, help="declared decimal digits of alpha/beta")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("spectrum", help="trace window |Tr U^l|^2")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--window", type=int, required=True)
    sp.add_argument("--index-range", default="OneToN")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("pcf", help="local or cumulative pair correlation")
    common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int, nargs="+")
    g.add_argument("--cumulative-N", dest="cumulative_N", type=int)
    sp.add_argument("--testfn", default="fejer")
    sp.add_argument("--index-range", default="OneToN")
    sp.set_defaults(func=cmd_pcf)

    sp = sub.add_parser("cf", help="continued fractions and related statistics")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--value")
    g.add_argument("--random-samples", type=int)
    sp.add_argument("--precision", type=int, default=None)
    sp.add_argument("--digits", type=int, default=80, help="digits of each random sample")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--terms", type=int, default=60)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--report", choices=["identities", "levy", "growth", "fn"], default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_cf)

    sp = sub.add_parser("weyl", help="bound chain reports")
    common(sp)
    sp.add_argument("--n-grid", type=int, nargs="+", required=True)
    sp.add_argument("--r", type=float, default=None)
    sp.add_argument("--chain", choices=["quadratic", "general"], default="quadratic")
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.set_defaults(func=cmd_weyl)

    for name, func in (("sweep", cmd_sweep), ("gaps", cmd_gaps), ("exponents", cmd_exponents)):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--workers", type=int, default=None)
        sp.add_argument("--out-dir", default=".")
        if name == "gaps":
            sp.add_argument("--m-min", type=int, default=2)
            sp.add_argument("--m-max", type=int, default=10)
        if name == "exponents":
            sp.add_argument("--alpha-selection", choices=["random", "golden", "file"], default=None)
            sp.add_argument("--alpha-file", default=None)
        sp.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (PCFError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0
