"""Upper and lower linear-sieve functions F(u) and f(u).

Closed forms used (with C = 2 e^gamma):

    F(u) = C/u                                       0 < u <= 3
    F(u) = C/u * (1 + L(u-1))                        3 <= u <= 5
    f(u) = 0                                         1 <= u <= 2
    f(u) = C/u * log(u-1)                            2 <= u <= 4
    f(u) = C/u * (log(u-1) + int_3^{u-1} L(t-1)/t dt) 4 <= u <= 6

where L(v) = int_2^v log(t-1)/t dt.  The 2 < u < 4 piece of f is the
standard continuation that solves (u f(u))' = F(u-1) from f(2) = 0; the
analytic bound only ever needs f(23/5).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ._constants import CONSTANT_REL_ERR, E_GAMMA
from .errors import DomainError
from .quadrature import DEFAULT_CONFIG, QuadConfig, integrate, integrate_nested

__all__ = [
    "SieveFnPoint",
    "log_ratio",
    "log_ratio_integral",
    "double_log_integral",
    "upper_F",
    "lower_f",
    "sieve_point",
    "ode_residuals",
    "F_MAX",
    "F_MIN_EXCLUSIVE",
    "f_MIN",
    "f_MAX",
]

TWO_E_GAMMA = 2.0 * E_GAMMA

F_MIN_EXCLUSIVE, F_MAX = 0.0, 5.0
f_MIN, f_MAX = 1.0, 6.0


def log_ratio(t: float) -> float:
    """The recurring integrand log(t - 1)/t."""
    return math.log(t - 1.0) / t


def log_ratio_integral(upper: float, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """L(upper) = int_2^upper log(t-1)/t dt, zero for upper <= 2."""
    if upper <= 2.0:
        return 0.0, 0.0
    return integrate(log_ratio, (2.0, upper), cfg)


def double_log_integral(upper: float, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """int_3^upper dt1/t1 int_2^{t1-1} log(t2-1)/t2 dt2, zero for upper <= 3."""
    if upper <= 3.0:
        return 0.0, 0.0
    return integrate_nested(
        lambda t1, inner: inner / t1,
        lambda t1: (2.0, t1 - 1.0),
        lambda t1, t2: log_ratio(t2),
        (3.0, upper),
        cfg,
    )


def _key(u: float) -> float:
    return round(float(u), 12)


@lru_cache(maxsize=65536)
def _upper_F_cached(u: float, cfg: QuadConfig) -> tuple[float, float]:
    scale = TWO_E_GAMMA / u
    if u <= 3.0:
        return scale, scale * CONSTANT_REL_ERR
    integral, err = log_ratio_integral(u - 1.0, cfg)
    value = scale * (1.0 + integral)
    return value, scale * err + abs(value) * CONSTANT_REL_ERR


@lru_cache(maxsize=65536)
def _lower_f_cached(u: float, cfg: QuadConfig) -> tuple[float, float]:
    if u <= 2.0:
        return 0.0, 0.0
    scale = TWO_E_GAMMA / u
    log_part = math.log(u - 1.0)
    if u < 4.0:
        value = scale * log_part
        return value, abs(value) * CONSTANT_REL_ERR
    integral, err = double_log_integral(u - 1.0, cfg)
    value = scale * (log_part + integral)
    return value, scale * err + abs(value) * CONSTANT_REL_ERR


def upper_F(u: float, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Upper sieve function F(u) on (0, 5] as ``(value, err)``."""
    if not (F_MIN_EXCLUSIVE < u <= F_MAX):
        raise DomainError(f"F(u) is provided for 0 < u <= 5, got u={u}")
    return _upper_F_cached(_key(u), cfg)


def lower_f(u: float, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Lower sieve function f(u) on [1, 6] as ``(value, err)``."""
    if not (f_MIN <= u <= f_MAX):
        raise DomainError(f"f(u) is provided for 1 <= u <= 6, got u={u}")
    return _lower_f_cached(_key(u), cfg)


@dataclass(frozen=True)
class SieveFnPoint:
    u: float
    F: float
    f: float
    err: float


def sieve_point(u: float, cfg: QuadConfig = DEFAULT_CONFIG) -> SieveFnPoint:
    """Both functions at ``u``; valid where both are provided, 1 <= u <= 5."""
    F, eF = upper_F(u, cfg)
    f, ef = lower_f(u, cfg)
    return SieveFnPoint(u=u, F=F, f=f, err=max(eF, ef))


def ode_residuals(grid_step: float, cfg: QuadConfig | None = None) -> float:
    """Largest defect of the delay system on a uniform grid.

    Checks |d(uF)/du - f(u-1)| for u = 3 + k*h in (3, 5) and
    |d(uf)/du - F(u-1)| for u = 2 + k*h in (2, 5), both derivatives by
    central differences.  Grid points are shared between neighbouring
    stencils so every function value is computed once.
    """
    if not (0.0 < grid_step <= 0.01):
        raise ValueError("grid_step must lie in (0, 0.01]")
    cfg = cfg or QuadConfig(abs_tol=1e-13)
    h = grid_step
    worst = 0.0

    n_up = int(math.floor(2.0 / h + 1e-9))
    uF = [(3.0 + k * h) * upper_F(3.0 + k * h, cfg)[0] for k in range(n_up + 1)]
    for k in range(1, n_up):
        u = 3.0 + k * h
        if not (3.0 < u < 5.0):
            continue
        deriv = (uF[k + 1] - uF[k - 1]) / (2.0 * h)
        worst = max(worst, abs(deriv - lower_f(u - 1.0, cfg)[0]))

    n_lo = int(math.floor(3.0 / h + 1e-9))
    uf = [(2.0 + k * h) * lower_f(2.0 + k * h, cfg)[0] for k in range(n_lo + 1)]
    for k in range(1, n_lo):
        u = 2.0 + k * h
        if not (2.0 < u < 5.0):
            continue
        deriv = (uf[k + 1] - uf[k - 1]) / (2.0 * h)
        worst = max(worst, abs(deriv - upper_F(u - 1.0, cfg)[0]))
    return worst
