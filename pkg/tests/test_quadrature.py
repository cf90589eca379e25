import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almostprime.errors import InvalidInterval, NonConvergence
from almostprime.quadrature import Interval, QuadConfig, integrate, integrate_nested

TIGHT = QuadConfig(abs_tol=1e-12)


def log_ratio(t):
    return math.log(t - 1.0) / t


def test_reciprocal_over_one_to_e():
    value, err = integrate(lambda t: 1.0 / t, (1.0, math.e), TIGHT)
    assert abs(value - 1.0) < 1e-12
    assert err <= 1e-12


def test_log_ratio_against_dilogarithm():
    # int_2^u log(t-1)/t dt = log(u-1) log u + Li2(1-u) + pi^2/12
    for u in (2.3, 2.6, 3.6, 4.0):
        ref = mpmath.log(u - 1) * mpmath.log(u) + mpmath.polylog(2, 1 - u) + mpmath.pi**2 / 12
        value, err = integrate(log_ratio, (2.0, u), TIGHT)
        assert abs(value - float(ref)) <= max(err, 1e-15) + 1e-15


def test_log_ratio_against_million_panel_midpoint():
    n = 10**6
    t = 2.0 + 0.6 * (np.arange(n) + 0.5) / n
    ref = float(np.sum(np.log(t - 1.0) / t)) * 0.6 / n
    value, _ = integrate(log_ratio, (2.0, 2.6))
    assert abs(value - 0.06378388800370723) < 1e-10
    assert abs(value - ref) < 1e-10


def test_nested_matches_closed_form():
    # int_0^1 int_0^x (x + y) dy dx = 1/2
    value, err = integrate_nested(
        lambda x, inner: inner, lambda x: (0.0, x), lambda x, y: x + y, (0.0, 1.0), TIGHT
    )
    assert abs(value - 0.5) < 1e-12
    # int_3^4 dt1/t1 int_2^{t1-1} dt2/t2 ... closed form 1 - 3 log(4/3) for
    # int_3^4 (t1 - 3)/t1 dt1
    value, _ = integrate_nested(
        lambda t1, inner: inner / t1, lambda t1: (2.0, t1 - 1.0), lambda t1, t2: 1.0, (3.0, 4.0), TIGHT
    )
    assert abs(value - (1.0 - 3.0 * math.log(4.0 / 3.0))) < 1e-12


def test_nested_double_log_against_2d_midpoint():
    n = 2000
    s = (np.arange(n) + 0.5) / n
    t1, u = np.meshgrid(3.0 + 0.6 * s, s, indexing="ij")
    t2 = 2.0 + u * (t1 - 3.0)
    ref = float(np.sum(np.log(t2 - 1.0) / t2 * (t1 - 3.0) / t1)) * 0.6 / (n * n)
    value, err = integrate_nested(
        lambda t1, inner: inner / t1, lambda t1: (2.0, t1 - 1.0), lambda t1, t2: log_ratio(t2), (3.0, 3.6)
    )
    assert abs(value - 0.0040231808397437965) < 1e-10
    assert abs(value - ref) < 1e-8


def test_empty_interval_is_zero():
    assert integrate(math.exp, (1.5, 1.5)) == (0.0, 0.0)


@pytest.mark.parametrize("lo,hi", [(2.0, 1.0), (math.nan, 1.0), (0.0, math.inf)])
def test_invalid_interval(lo, hi):
    with pytest.raises(InvalidInterval):
        Interval(lo, hi)
    with pytest.raises(InvalidInterval):
        integrate(math.exp, (lo, hi))


def test_non_convergence_reports_best_estimate():
    with pytest.raises(NonConvergence) as info:
        integrate(lambda t: 1.0 / math.sqrt(t) if t > 0 else 0.0, (0.0, 1.0), QuadConfig(1e-14, max_depth=6))
    assert math.isfinite(info.value.value)
    assert info.value.err_bound > 1e-14


def test_deterministic():
    runs = {integrate(log_ratio, (2.0, 3.7), TIGHT) for _ in range(3)}
    assert len(runs) == 1


def test_tighter_tolerance_refines():
    exact = 1.0 - math.cos(2.0)
    prev = None
    for tol in (1e-4, 1e-8, 1e-12):
        value, err = integrate(math.sin, (0.0, 2.0), QuadConfig(tol))
        assert err <= tol
        assert abs(value - exact) <= err + 1e-15
        if prev is not None:
            assert err <= prev
        prev = err


def test_tiny_interval_shortcut():
    cfg = QuadConfig()
    value, err = integrate(lambda t: 2.0, (1.0, 1.0 + 1e-14), cfg)
    assert value == pytest.approx(2e-14)


coefs = st.floats(-10, 10, allow_nan=False)
ends = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(a=coefs, b=coefs, lo=ends, width=st.floats(0.01, 4))
def test_linearity(a, b, lo, width):
    iv = (lo, lo + width)
    f, g = math.sin, lambda t: t * t
    cfg = QuadConfig(1e-9)
    lhs, e0 = integrate(lambda t: a * f(t) + b * g(t), iv, cfg)
    fi, e1 = integrate(f, iv, cfg)
    gi, e2 = integrate(g, iv, cfg)
    assert abs(lhs - (a * fi + b * gi)) <= e0 + abs(a) * e1 + abs(b) * e2 + 1e-9


@settings(max_examples=40, deadline=None)
@given(lo=ends, w1=st.floats(0.01, 2), w2=st.floats(0.01, 2))
def test_additivity(lo, w1, w2):
    m, hi = lo + w1, lo + w1 + w2
    whole, e0 = integrate(math.cos, (lo, hi), TIGHT)
    left, e1 = integrate(math.cos, (lo, m), TIGHT)
    right, e2 = integrate(math.cos, (m, hi), TIGHT)
    assert abs(whole - left - right) <= e0 + e1 + e2 + 1e-14


def test_tolerance_below_rounding_floor_fails_fast():
    with pytest.raises(NonConvergence, match="rounding floor"):
        integrate(lambda t: t * t, (3.0, 7.0), QuadConfig(1e-13))
