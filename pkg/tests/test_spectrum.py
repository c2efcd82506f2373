import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from integrable_pcf.errors import PrecisionError
from integrable_pcf.polynomial import PolynomialPhase
from integrable_pcf.reals import as_real, golden_ratio
from integrable_pcf.spectrum import (
    IndexRange,
    SpectrumParams,
    eigenphases,
    eigenphases_exact,
    reduced_phases,
    trace_power,
    trace_window,
    traces_from_phases,
)

SQ = PolynomialPhase((1, 0, 0))


def test_phases_n2():
    assert eigenphases_exact(SQ, SpectrumParams(2, 1, 0)) == [Fraction(1, 2), 0]
    np.testing.assert_array_equal(eigenphases(SQ, SpectrumParams(2, 1, 0)), [0.5, 0.0])


def test_phases_n3():
    assert eigenphases_exact(SQ, SpectrumParams(3, 1, 0)) == [Fraction(1, 3), Fraction(1, 3), 0]


def test_zero_map():
    for n in (1, 4, 9):
        assert not np.any(eigenphases(PolynomialPhase((2, 1, 0)), SpectrumParams(n, 0, 0)))
        assert eigenphases_exact(PolynomialPhase((1, 0, 0, 0)), SpectrumParams(n, 0, 0)) == [0] * n


def test_minus_n_to_n():
    p = SpectrumParams(3, 1, 0, IndexRange.parse("MinusNToN"))
    assert p.size == 7
    ph = eigenphases_exact(SQ, p)
    assert ph == [Fraction(k * k, 3) % 1 for k in range(-3, 4)]


def test_trace_examples():
    assert trace_power(SQ, SpectrumParams(7, Fraction(2, 3), 1), 0) == 7
    assert abs(trace_power(SQ, SpectrumParams(2, 1, 0), 1)) < 1e-15
    assert trace_power(SQ, SpectrumParams(6, 0, 0), 5) == pytest.approx(6)


def test_window_examples():
    w = trace_window(SQ, SpectrumParams(5, 0, 0), 3)
    np.testing.assert_allclose(w.values, 25.0)
    w = trace_window(SQ, SpectrumParams(2, 1, 0), 1)
    np.testing.assert_allclose(w.values, [0, 4, 0], atol=1e-28)
    assert w[0] == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 300), st.fractions(-3, 3, max_denominator=10**6), st.fractions(-3, 3, max_denominator=10**6))
def test_window_invariants(n, a, b):
    w = trace_window(PolynomialPhase((1, 2, 0)), SpectrumParams(n, a, b), n)
    assert w[0] == n * n
    assert np.all(w.values >= 0) and np.all(w.values <= n * n * (1 + 1e-12))
    np.testing.assert_array_equal(w.values, w.values[::-1])


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 512), st.fractions(-2, 2, max_denominator=10**6), st.fractions(-2, 2, max_denominator=10**6))
def test_rotation_matches_direct(n, a, b):
    params = SpectrumParams(n, a, b)
    fast = trace_window(SQ, params, n, method="rotation").values
    slow = trace_window(SQ, params, n, method="direct").values
    np.testing.assert_allclose(fast, slow, rtol=1e-8, atol=1e-8)


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 2048), st.fractions(-2, 2, max_denominator=10**6), st.fractions(-2, 2, max_denominator=10**6))
def test_exact_and_dd_agree(n, a, b):
    params = SpectrumParams(n, a, b)
    ex = trace_window(SQ, params, 16, phase_method="exact").values
    dd = trace_window(SQ, params, 16, phase_method="dd").values
    np.testing.assert_allclose(dd, ex, rtol=1e-8, atol=1e-8)


def test_dd_phases_against_exact_fractions():
    params = SpectrumParams(997, Fraction(355, 113), Fraction(-7, 11))
    exact = np.array([float(x) for x in eigenphases_exact(PolynomialPhase((1, 5, 0, 0)), params)])
    got = reduced_phases(PolynomialPhase((1, 5, 0, 0)), params, "dd").phases()
    d = np.abs(got - exact)
    assert np.all(np.minimum(d, 1 - d) < 2**-50)


def test_interval_alpha_matches_mpmath():
    g = golden_ratio(60)
    n = 1500
    params = SpectrumParams(n, g, 0)
    ph = eigenphases(PolynomialPhase((1, 0, 0)), params)
    import mpmath

    with mpmath.workdps(80):
        for k in (1, 17, 999, 1500):
            ref = mpmath.frac(mpmath.phi * k * k / n)
            assert abs(float(ref) - ph[k - 1]) < 1e-15


def test_precision_error_names_digits():
    alpha = as_real("0." + "3" * 55, 50)
    with pytest.raises(PrecisionError) as ei:
        trace_window(PolynomialPhase((1, 0, 0)), SpectrumParams(10**40, alpha, 0), 1)
    assert ei.value.required_digits > 50


def test_traces_from_phases_direct():
    th = np.array([0.1, 0.25, 0.7])
    out = traces_from_phases(th, 3, "direct")
    for ell in range(4):
        assert out[ell] == pytest.approx(np.exp(2j * math.pi * ell * th).sum())
