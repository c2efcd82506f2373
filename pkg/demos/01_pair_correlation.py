"""Local pair correlation of a quadratic phase against the Poisson value.

For an irrational alpha the local statistic scatters around f_hat(0) + f(0)
(2.0 for the Fejer pair); for alpha = beta = 0 every eigenphase is 0 and the
statistic collapses to n.
"""

from fractions import Fraction

from integrable_pcf import PolynomialPhase, SpectrumParams, TestFunction, golden_ratio, poisson_reference, rho2_at
from integrable_pcf import eigenphases, pair_count_oracle

phase = PolynomialPhase((1, 0, 0))
f = TestFunction.fejer()
print("Poisson reference:", poisson_reference(f))

alpha, beta = golden_ratio(), Fraction(1, 3)
for n in (64, 256, 1024, 4096):
    v = rho2_at(f, phase, SpectrumParams(n, alpha, beta))
    print(f"n={n:5d}  rho2={v.value:.6f}")

# the trace side agrees with direct pair counting for rational parameters
params = SpectrumParams(64, Fraction(355, 113), Fraction(2, 7))
spectral = rho2_at(f, phase, params).value
physical = pair_count_oracle(f, eigenphases(phase, params), 64)
print(f"spectral {spectral:.12f}  pair count {physical:.12f}")

# fully degenerate spectrum
print("alpha=beta=0, n=100:", rho2_at(f, phase, SpectrumParams(100, 0, 0)).value)
