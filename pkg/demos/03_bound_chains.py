"""Measured values along the quadratic and cubic bound chains.

Explicit inequalities report holds=True/False; inequalities with an
unspecified constant report the fitted constant lhs/rhs instead.
"""

from fractions import Fraction

from integrable_pcf import PolynomialPhase, general_bound_chain, golden_ratio, quadratic_bound_chain

alpha, beta = golden_ratio(), Fraction(1, 5)
for n in (64, 256, 1024):
    res = quadratic_bound_chain(PolynomialPhase((1, 0, 0)), alpha, beta, n)
    print(f"quadratic n={n}: rho={res.rho:.4f}  exponent {res.exponent:.3f} (target {res.target})")
    for r in res.reports:
        tag = f"holds={r.holds}" if r.explicit else f"constant={r.ratio:.3g}"
        print(f"    {r.equation:22s} {tag}")

res = general_bound_chain(PolynomialPhase((1, 0, 0, 0)), alpha, beta, 128)
print(f"cubic n=128: rho={res.rho:.4f}  convergent info {res.info}")

# a resonant choice: alpha = n makes every eigenphase coincide
res = quadratic_bound_chain(PolynomialPhase((1, 0, 0)), 64, 0, 64)
print(f"resonant alpha=n=64: rho={res.rho:.1f}, cap hits {res.info['cap_hits']}")
