"""Exponent system and the final lower-bound bracket B(theta, delta).

All sizes are exponents of q: x = q^theta, y = q^delta and, at epsilon = 0,

    M  = x q^-1          -> theta - 1
    N  = x^1/2 q^-3/4    -> theta/2 - 3/4
    D  = M N             -> (6 theta - 7)/4
    z  = D^(5/23)        -> (30 theta - 35)/92
    D1 = N^2             -> theta - 3/2

The bracket is

    B = main - corr1 - corr2 - corr3

with ``main`` the lower-sieve term 2(log 18/5 + double integral), the two
linear-sieve upper bounds over p in [z, D^(8/23)) and [D^(8/23), M), and the
Selberg bound over [M, y).  Positivity of B certifies P2(a, q) << q^theta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from ._constants import E_GAMMA
from .errors import InfeasibleParams, IntegrandPole
from .quadrature import DEFAULT_CONFIG, QuadConfig, integrate, integrate_nested
from .sieve_functions import double_log_integral, log_ratio

__all__ = [
    "BoundParams",
    "ExponentSystem",
    "BracketBreakdown",
    "feasible",
    "main_term",
    "correction1",
    "correction2",
    "correction2_closed_form",
    "correction3",
    "bracket",
    "main_term_from_lower_f",
    "HEADLINE_THETA",
    "HEADLINE_DELTA",
    "HEADLINE_MARGIN",
    "POLE_GAP",
]

HEADLINE_THETA = 1.8345
HEADLINE_DELTA = 0.86
HEADLINE_MARGIN = 0.0004282583

# Smallest admissible value of 3 theta/2 - 7/4 - beta on the beta ranges.
POLE_GAP = 0.05

# The lower sieve is always evaluated at s = log D / log z = 23/5.
SIFTING_U = 23.0 / 5.0


@dataclass(frozen=True)
class BoundParams:
    theta: float
    delta: float
    epsilon: float = 0.0

    def __post_init__(self):
        if not (1.0 < self.theta < 2.0):
            raise ValueError(f"theta must lie in (1, 2), got {self.theta}")
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be non-negative")

    @property
    def exponents(self) -> "ExponentSystem":
        return ExponentSystem.from_params(self)


@dataclass(frozen=True)
class ExponentSystem:
    m_exp: float
    n_exp: float
    d_exp: float
    z_exp: float
    lam: float
    d1_exp: float
    cut_exp: float  # D^(8/23), the split between the two linear-sieve sums

    @classmethod
    def from_params(cls, p: BoundParams) -> "ExponentSystem":
        th = p.theta
        n_exp = th / 2.0 - 0.75
        d_exp = (6.0 * th - 7.0) / 4.0
        return cls(
            m_exp=th - 1.0,
            n_exp=n_exp,
            d_exp=d_exp,
            z_exp=(30.0 * th - 35.0) / 92.0,
            lam=3.0 - th / p.delta - p.epsilon,
            d1_exp=2.0 * n_exp,
            cut_exp=(12.0 * th - 14.0) / 23.0,
        )


@dataclass(frozen=True)
class BracketBreakdown:
    params: BoundParams
    main: float
    corr1: float
    corr2: float
    corr3: float
    total: float
    err: float
    component_err: tuple = field(default=(0.0, 0.0, 0.0, 0.0))

    @property
    def certified(self) -> bool:
        """True when the bracket is positive beyond its error bound."""
        return self.total - self.err > 0.0

    def as_row(self) -> dict:
        return {
            "theta": self.params.theta,
            "delta": self.params.delta,
            "main": self.main,
            "corr1": self.corr1,
            "corr2": self.corr2,
            "corr3": self.corr3,
            "total": self.total,
            "err": self.err,
        }


def feasible(p: BoundParams) -> tuple[bool, list[str]]:
    """Check the ordering constraints; returns ``(ok, failed_reasons)``."""
    th, de = p.theta, p.delta
    e = ExponentSystem.from_params(p)
    reasons = []
    if not e.d_exp > 0.0:
        reasons.append(f"D exponent (6*theta-7)/4 = {e.d_exp:.6g} must be positive")
    if not e.m_exp < de:
        reasons.append(f"M < y fails: theta-1 = {e.m_exp:.6g} >= delta = {de:.6g}")
    if not de < e.d_exp:
        reasons.append(f"y < D fails: delta = {de:.6g} >= (6*theta-7)/4 = {e.d_exp:.6g}")
    if not th < 3.0 * de:
        reasons.append(f"lambda > 0 fails: theta = {th:.6g} >= 3*delta = {3 * de:.6g}")
    if not e.z_exp < e.cut_exp < e.m_exp:
        reasons.append(
            "integration limits out of order: need (30*theta-35)/92 < (12*theta-14)/23 < theta-1, "
            f"got {e.z_exp:.6g}, {e.cut_exp:.6g}, {e.m_exp:.6g}"
        )
    return not reasons, reasons


def _require_feasible(p: BoundParams) -> ExponentSystem:
    ok, reasons = feasible(p)
    if not ok:
        raise InfeasibleParams(reasons)
    return ExponentSystem.from_params(p)


def _linear_coefficient(p: BoundParams) -> float:
    # Partial summation gives (6 theta - 7)/(4 delta); the sieve bound
    # contributes 2 and the Richert weight 1/lambda = delta/(3 delta - theta - eps delta).
    # At eps = 0 this is (6 theta - 7)/(2 (3 delta - theta)).
    th, de = p.theta, p.delta
    return (6.0 * th - 7.0) / (2.0 * (3.0 * de - th - p.epsilon * de))


def _check_pole(e: ExponentSystem, beta_hi: float) -> None:
    # c - beta is smallest at the right end of the beta range.
    gap = e.d_exp - beta_hi
    if gap < POLE_GAP:
        raise IntegrandPole(
            f"3*theta/2 - 7/4 - beta = {gap:.6g} < {POLE_GAP} at beta = {beta_hi:.6g}"
        )


@lru_cache(maxsize=32)
def _main_term_cached(cfg: QuadConfig) -> tuple[float, float]:
    integral, err = double_log_integral(SIFTING_U - 1.0, cfg)
    return 2.0 * (math.log(18.0 / 5.0) + integral), 2.0 * err


def main_term(p: BoundParams | None = None, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """2(log 18/5 + int_3^{18/5} dt1/t1 L(t1-1)), independent of ``p``.

    Equals (23/5) f(23/5) / e^gamma.
    """
    if p is not None:
        _require_feasible(p)
    return _main_term_cached(cfg)


def _beta_weight(de: float, c: float):
    return lambda beta: (de - beta) / (beta * (c - beta))


def correction1(p: BoundParams, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Linear-sieve upper bound for primes in [z, D^(8/23))."""
    e = _require_feasible(p)
    th, de = p.theta, p.delta
    lo, hi = e.z_exp, e.cut_exp
    _check_pole(e, hi)
    weight = _beta_weight(de, e.d_exp)
    denom = 30.0 * th - 35.0
    num0 = 108.0 * th - 126.0

    # log(D/p)/log z - 1 in exponent form; runs from 13/5 down to 2.
    def inner_upper(beta: float) -> float:
        return max(2.0, (num0 - 92.0 * beta) / denom)

    coef = _linear_coefficient(p)
    value, err = integrate_nested(
        lambda beta, inner: weight(beta) * (1.0 + inner),
        lambda beta: (2.0, inner_upper(beta)),
        lambda beta, t: log_ratio(t),
        (lo, hi),
        cfg.with_tol(cfg.abs_tol / abs(coef)),
    )
    return coef * value, abs(coef) * err


def correction2(p: BoundParams, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Linear-sieve upper bound for primes in [D^(8/23), M), by quadrature."""
    e = _require_feasible(p)
    lo, hi = e.cut_exp, e.m_exp
    _check_pole(e, hi)
    coef = _linear_coefficient(p)
    value, err = integrate(_beta_weight(p.delta, e.d_exp), (lo, hi), cfg.with_tol(cfg.abs_tol / abs(coef)))
    return coef * value, abs(coef) * err


def correction2_closed_form(p: BoundParams) -> float:
    """Same quantity as :func:`correction2` via partial fractions.

    (delta - b)/(b (c - b)) = (delta/c)/b + ((delta - c)/c)/(c - b).
    """
    e = _require_feasible(p)
    de, c = p.delta, e.d_exp
    lo, hi = e.cut_exp, e.m_exp
    integral = (de / c) * math.log(hi / lo) + ((de - c) / c) * math.log((c - lo) / (c - hi))
    return _linear_coefficient(p) * integral


def correction3(p: BoundParams) -> float:
    """Selberg upper bound for n in [M, y); closed form."""
    _require_feasible(p)
    th, de = p.theta, p.delta
    # (1/lambda) (log D/log y) (log(y/M)/log N)^2 with the same 1/lambda
    # redistribution as the linear terms.
    coef = (6.0 * th - 7.0) / (3.0 * de - th - p.epsilon * de)
    ratio = 2.0 * (de - th + 1.0) / (2.0 * th - 3.0)
    return coef * ratio * ratio


def bracket(p: BoundParams, cfg: QuadConfig = DEFAULT_CONFIG) -> BracketBreakdown:
    """Evaluate B(theta, delta) with its per-term breakdown and error bound."""
    _require_feasible(p)
    main, e0 = main_term(None, cfg)
    c1, e1 = correction1(p, cfg)
    c2, e2 = correction2(p, cfg)
    c3 = correction3(p)
    e3 = abs(c3) * 8 * 2.0 ** -52
    total = main - c1 - c2 - c3
    # Rounding of the three subtractions is charged to the bound as well.
    rounding = 4 * 2.0 ** -52 * (abs(main) + abs(c1) + abs(c2) + abs(c3))
    err = e0 + e1 + e2 + e3 + rounding
    return BracketBreakdown(p, main, c1, c2, c3, total, err, (e0, e1, e2, e3))


def main_term_from_lower_f(cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """(23/5) f(23/5) / e^gamma, the cross-module route to the main term."""
    from .sieve_functions import lower_f

    value, err = lower_f(SIFTING_U, cfg)
    return SIFTING_U * value / E_GAMMA, SIFTING_U * err / E_GAMMA
