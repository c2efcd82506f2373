import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from integrable_pcf.diophantine import dirichlet_approx
from integrable_pcf.errors import CostGuardError
from integrable_pcf.polynomial import PolynomialPhase
from integrable_pcf.reals import sqrt_real
from integrable_pcf.spectrum import SpectrumParams, trace_power
from integrable_pcf.weyl import (
    differenced_sum,
    forward_difference,
    korobov_bound_check,
    minsum,
    nearest_int_dist,
    representation_count,
    representation_counts,
    weyl_inequality_check,
    weyl_sum,
)

x, h, h1, h2, h3 = sympy.symbols("x h h1 h2 h3")


def sym_poly(coeffs):
    return sum(sympy.Rational(str(c)) * x ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs))


def test_nearest_int_dist():
    assert nearest_int_dist(Fraction(23, 10)) == Fraction(3, 10)
    assert nearest_int_dist(Fraction(-5, 4)) == Fraction(1, 4)
    assert nearest_int_dist(Fraction(1, 2)) == Fraction(1, 2)
    np.testing.assert_allclose(nearest_int_dist(np.array([2.3, -1.25, 0.5])), [0.3, 0.25, 0.5])


def test_forward_difference_examples():
    d = forward_difference(PolynomialPhase((1, 0, 0)), [h])
    assert sympy.expand(d(x) - (2 * h * x + h**2)) == 0
    d = forward_difference(PolynomialPhase((1, 0, 0, 0)), [h1, h2])
    assert sympy.expand(d(x) - (6 * h1 * h2 * x + 3 * h1 * h2**2 + 3 * h1**2 * h2)) == 0


@pytest.mark.parametrize("coeffs", [(2, -1, 3, 5), (Fraction(1, 3), 0, 2, 0, 1), (1, 5, 0, 0), (4, 1, 0, 0, 0, 2)])
def test_difference_structure(coeffs):
    phase = PolynomialPhase(coeffs)
    k = phase.degree
    hs = [h1, h2, h3][: k - 1] if k <= 4 else [h1, h2, h3, h][: k - 1]
    d = forward_difference(phase, hs)
    expr = sym_poly(coeffs)
    for s in hs:  # sympy oracle
        expr = sympy.expand(expr.subs(x, x + s) - expr)
    assert sympy.expand(d(x) - expr) == 0
    assert d.degree == 1
    assert sympy.expand(d.coeffs[0] - d.expected_leading) == 0
    assert sympy.expand(d.coeffs[0] - math.factorial(k) * sympy.Rational(str(coeffs[0])) * sympy.Mul(*hs)) == 0
    full = forward_difference(phase, hs + [h])
    assert full.degree == 0
    assert sympy.expand(full.coeffs[0] - math.factorial(k) * sympy.Rational(str(coeffs[0])) * sympy.Mul(*hs) * h) == 0


def test_weyl_sum_examples():
    sq = PolynomialPhase((1, 0, 0))
    assert weyl_sum(sq, 9, 0) == pytest.approx(9)
    assert abs(weyl_sum(sq, 2, 1)) < 1e-15


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 256), st.integers(-300, 300), st.lists(st.fractions(-3, 3, max_denominator=50), min_size=3, max_size=4))
def test_weyl_sum_matches_trace(n, ell, coeffs):
    coeffs[0] = coeffs[0] or Fraction(1)
    phase = PolynomialPhase(tuple(coeffs))
    t = weyl_sum(phase, n, ell)
    assert abs(t) <= n * (1 + 1e-12)
    ref = trace_power(phase, SpectrumParams(n, 1, 0), ell)
    assert abs(t - ref) <= 1e-10 * max(1.0, abs(ref)) + 1e-9


def brute_differenced(u, j):
    """Literal nested sums over h and the sets I_j."""
    n = u.size
    f = np.angle(u) / (2 * math.pi)
    total = 0.0
    for hs in itertools.product(range(-(n - 1), n), repeat=j):
        for x0 in range(n):
            pts = [x0 + sum(c) for c in itertools.product(*[(0, s) for s in hs])]
            if not all(0 <= p < n for p in pts):
                continue
            val = 0.0
            for signs in itertools.product((0, 1), repeat=j):
                p = x0 + sum(s * b for s, b in zip(hs, signs))
                val += (-1) ** (j - sum(signs)) * f[p]
            total += math.cos(2 * math.pi * val)
    return total


@pytest.mark.parametrize("j", [1, 2])
def test_differenced_sum_brute_force(j):
    rng = np.random.default_rng(j)
    u = np.exp(2j * math.pi * rng.random(6))
    assert differenced_sum(u, j) == pytest.approx(brute_differenced(u, j), rel=1e-10, abs=1e-9)


def test_weyl_inequality_examples():
    rep = weyl_inequality_check(PolynomialPhase((1, 0, 0)), 4, 1)
    assert rep.holds and rep.lhs == pytest.approx(rep.rhs)  # j = 1 is an identity
    rep = weyl_inequality_check(PolynomialPhase((1, 2, 0, 1)), 16, 2, ell=0)
    assert rep.lhs == pytest.approx(16**4) and rep.holds


def test_weyl_guard():
    with pytest.raises(CostGuardError):
        weyl_inequality_check(PolynomialPhase((1, 0, 0, 0)), 65, 2)
    with pytest.raises(ValueError):
        weyl_inequality_check(PolynomialPhase((1, 0, 0)), 8, 2)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.fractions(-3, 3, max_denominator=30), min_size=4, max_size=4), st.integers(2, 24),
       st.integers(1, 2), st.integers(-24, 24))
def test_weyl_inequality_random_cubic(coeffs, n, j, ell):
    coeffs[0] = coeffs[0] or Fraction(1)
    assert weyl_inequality_check(PolynomialPhase(tuple(coeffs)), n, j, ell).holds


def brute_rep(x, n, factors):
    vals = [v for v in range(-n, n + 1) if v]
    return sum(1 for t in itertools.product(vals, repeat=factors) if math.prod(t) == x)


def test_representation_examples():
    assert representation_count(6, 10) == 8 == brute_rep(6, 10, 2)
    assert representation_count(1, 3) == 2
    assert representation_count(12, 4, factors=3) == brute_rep(12, 4, 3)
    assert representation_count(36, 4, factors=3, factorial_scale=True) == brute_rep(6, 4, 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(1, 8), st.integers(2, 3))
def test_representation_symmetric_and_brute(x, n, factors):
    assert representation_count(x, n, factors) == representation_count(-x, n, factors) == brute_rep(x, n, factors)


def test_representation_table():
    c = representation_counts(6, 2)
    for y in range(1, 37):
        assert 2 * c[y] == brute_rep(y, 6, 2)


def test_multiplicity_growth():
    ratios = []
    for n in (50, 100, 200, 400):
        ratios.append(math.log(2 * representation_counts(n, 2).max()) / math.log(n))
    assert all(b < a for a, b in zip(ratios, ratios[1:]))


def test_minsum_examples():
    assert minsum(Fraction(1, 2), 2, 1, 4, 4) == 9
    assert minsum(3, 5, 0, 17, 6) == 17 * 6


def test_minsum_float_oracle():
    s = sqrt_real(2)
    got = minsum(s, 10, 1, 100, 50.0, factor=1.0)
    ref = 0.0
    for xx in range(1, 101):
        d = nearest_int_dist(xx * math.sqrt(2) / 10)
        ref += min(50.0, 1 / d) if d else 50.0
    assert got == pytest.approx(ref, rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.fractions(-4, 4, max_denominator=500), st.integers(1, 12), st.integers(0, 2), st.integers(1, 300))
def test_minsum_monotone_periodic(a, n, s, X):
    assert minsum(a, n, s, X + 1, 40.0) >= minsum(a, n, s, X, 40.0)
    assert minsum(a, n, s, X, 40.0) == minsum(a + n**s, n, s, X, 40.0)


def test_korobov():
    rep = korobov_bound_check(2, 0, 50, 30, dirichlet_approx(2, 30))
    assert rep.lhs == 30 * 50 and rep.ratio <= 1
    s = sqrt_real(2)
    rep = korobov_bound_check(s, 0, 100, 100, dirichlet_approx(s, 100))
    assert 0 < rep.ratio < 1


def test_korobov_ratio_stable():
    rng = np.random.default_rng(8)
    for _ in range(20):
        # diophantine-like: quadratic irrationals sqrt(m) for non-square m
        m = int(rng.integers(2, 200))
        if math.isqrt(m) ** 2 == m:
            continue
        a = sqrt_real(m)
        rs = [korobov_bound_check(a, 0, P, P, dirichlet_approx(a, P)).ratio for P in (100, 400, 1600)]
        assert max(rs) / min(rs) < 4
