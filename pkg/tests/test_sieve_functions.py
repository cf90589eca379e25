import math

import mpmath
import pytest

from almostprime._constants import E_GAMMA, EULER_GAMMA
from almostprime.errors import DomainError
from almostprime.quadrature import QuadConfig
from almostprime.sieve_functions import (
    TWO_E_GAMMA,
    double_log_integral,
    log_ratio_integral,
    lower_f,
    ode_residuals,
    sieve_point,
    upper_F,
)

C = 2.0 * math.exp(EULER_GAMMA)


def L_ref(v: float) -> float:
    return float(mpmath.log(v - 1) * mpmath.log(v) + mpmath.polylog(2, 1 - v) + mpmath.pi**2 / 12)


def test_constant():
    assert TWO_E_GAMMA == pytest.approx(C, rel=1e-15)
    assert E_GAMMA == pytest.approx(1.7810724179901979852, rel=1e-15)


@pytest.mark.parametrize("u", [0.5, 1.0, 2.0, 2.9, 3.0])
def test_F_first_branch(u):
    assert upper_F(u)[0] == pytest.approx(C / u, rel=1e-15)


@pytest.mark.parametrize("u", [3.2, 4.0, 4.6, 5.0])
def test_F_second_branch_against_dilog(u):
    value, err = upper_F(u, QuadConfig(1e-13))
    assert abs(value - C / u * (1.0 + L_ref(u - 1.0))) < 1e-12


def test_f_vanishes_up_to_two():
    for k in range(101):
        assert lower_f(1.0 + k / 100.0) == (0.0, 0.0)


@pytest.mark.parametrize("u", [2.5, 3.0, 3.9])
def test_f_middle_branch(u):
    assert lower_f(u)[0] == pytest.approx(C / u * math.log(u - 1.0), rel=1e-14)


def test_f_at_sifting_limit_against_mpmath():
    # f(23/5) = C/u (log(u-1) + int_3^{u-1} L(t-1)/t dt)
    u = 23.0 / 5.0
    inner = mpmath.quad(lambda t: L_ref(float(t) - 1.0) / t, [3, u - 1])
    ref = C / u * (math.log(u - 1.0) + float(inner))
    value, err = lower_f(u, QuadConfig(1e-13))
    assert abs(value - ref) < 1e-11


@pytest.mark.parametrize("u", [0.0, -1.0, 5.0001])
def test_F_domain(u):
    with pytest.raises(DomainError):
        upper_F(u)


@pytest.mark.parametrize("u", [0.999, 6.001])
def test_f_domain(u):
    with pytest.raises(DomainError):
        lower_f(u)


def test_continuity_at_branch_points():
    h = 1e-11
    cfg = QuadConfig()
    for fn, u in ((upper_F, 3.0), (lower_f, 2.0), (lower_f, 4.0)):
        assert abs(fn(u - h, cfg)[0] - fn(u + h, cfg)[0]) < 10 * cfg.abs_tol


def test_helper_integrals_zero_below_start():
    assert log_ratio_integral(2.0) == (0.0, 0.0)
    assert double_log_integral(3.0) == (0.0, 0.0)


def test_sieve_point_bundles_both():
    pt = sieve_point(4.6)
    assert pt.F == upper_F(4.6)[0]
    assert pt.f == lower_f(4.6)[0]
    assert pt.err >= 0.0


def test_ordering_f_below_F():
    for k in range(1, 50):
        u = 1.0 + k * 0.08
        assert lower_f(u)[0] < upper_F(u)[0]


def test_ode_residuals_coarse_step():
    assert ode_residuals(1e-3) < 1e-5


def test_ode_residuals_rejects_bad_step():
    with pytest.raises(ValueError):
        ode_residuals(0.1)
