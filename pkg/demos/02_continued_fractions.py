"""Continued fraction tools: convergents, Dirichlet approximation and the Levy statistic."""

import numpy as np

from integrable_pcf import LEVY_CONSTANT, as_real, cf_expand, dirichlet_approx, golden_ratio, khinchin_levy_stat
from integrable_pcf import cross_determinant_check, find_good_convergent

cf = cf_expand(as_real("3.14159265358979323846264338327950288419716939937510", 50), max_terms=12)
print("pi quotients:", cf.quotients)
print("convergents:", [f"{p}/{q}" for p, q in zip(cf.p, cf.q)][:6])
print("cross determinant m=5, k=3:", cross_determinant_check(cf, 5, 3))

# Dirichlet: |alpha - a/q| <= 1/(qQ) with q <= Q, certified over the input interval
for Q in (10, 100, 1000):
    r = dirichlet_approx(golden_ratio(), Q)
    print(f"Q={Q:5d}  {r.a}/{r.q}")

# q_m^(1/m) for random alpha settles near the Levy constant
rng = np.random.default_rng(1)
vals = []
for _ in range(100):
    digits = "".join(str(d) for d in rng.integers(0, 10, size=120))
    vals.append(float(khinchin_levy_stat(cf_expand(as_real("0." + digits, 120), max_terms=60), 50)))
print(f"mean q_50^(1/50) = {np.mean(vals):.4f}  (reference {LEVY_CONSTANT:.4f})")

g = find_good_convergent(cf_expand(golden_ratio(200), max_terms=400), n=10**4, k=3, r=0.5, eps=0.2)
print("good convergent for the golden ratio at n=1e4:", g)
