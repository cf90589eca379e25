"""Deterministic adaptive quadrature with embedded Gauss-Kronrod error bounds.

Every panel is integrated with the 15-point Kronrod rule and the embedded
7-point Gauss rule.  ``|K15 - G7|`` bounds the Gauss error, which for the
smooth integrands used here dominates the Kronrod error by many orders of
magnitude, so the returned ``err_bound`` is a deliberately pessimistic bound
on ``|value - integral|``.  Refinement is global and greedy: the panel with
the largest bound is bisected until the summed bound meets ``abs_tol``.  Ties
are broken by creation order, so results are bit-reproducible.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from .errors import InvalidInterval, NonConvergence

__all__ = ["Interval", "QuadConfig", "integrate", "integrate_nested", "DEFAULT_CONFIG"]

_EPS = 2.0 ** -52

# 15-point Kronrod abscissae (positive half, descending) and weights; the
# 7-point Gauss rule lives on the odd-indexed abscissae plus the centre.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
)
_WGK_CENTRE = 0.209482141084727828012999174891714
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
)
_WG_CENTRE = 0.417959183673469387755102040816327


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidInterval(f"endpoints must be finite, got [{self.lo}, {self.hi}]")
        if lo > hi:
            raise InvalidInterval(f"lo > hi in [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    max_depth: int = 60
    min_width: float = 1e-13

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if not self.min_width > 0:
            raise ValueError("min_width must be positive")

    def with_tol(self, abs_tol: float) -> "QuadConfig":
        return QuadConfig(abs_tol, self.max_depth, self.min_width)


DEFAULT_CONFIG = QuadConfig()


def _as_interval(iv) -> Interval:
    if isinstance(iv, Interval):
        return iv
    lo, hi = iv
    return Interval(lo, hi)


def _panel(f, a: float, b: float):
    """Kronrod value, Gauss-Kronrod bound and integral of |f| on [a, b]."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    rk = _WGK_CENTRE * fc
    rg = _WG_CENTRE * fc
    ra = _WGK_CENTRE * abs(fc)
    for j in range(7):
        dx = h * _XGK[j]
        s = f(c - dx) + f(c + dx)
        rk += _WGK[j] * s
        ra += _WGK[j] * abs(s)
        if j & 1:
            rg += _WG[j >> 1] * s
    return rk * h, abs((rk - rg) * h), ra * abs(h)


def _panel_prop(f, a: float, b: float):
    """Like :func:`_panel` for integrands returning ``(value, value_err)``.

    The fourth element is the Kronrod-weighted propagation of the pointwise
    errors, a bound on how much they can move the panel value.
    """
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc, ec = f(c)
    rk = _WGK_CENTRE * fc
    rg = _WG_CENTRE * fc
    ra = _WGK_CENTRE * abs(fc)
    rp = _WGK_CENTRE * ec
    for j in range(7):
        dx = h * _XGK[j]
        fl, el = f(c - dx)
        fr, er = f(c + dx)
        s = fl + fr
        rk += _WGK[j] * s
        ra += _WGK[j] * (abs(fl) + abs(fr))
        rp += _WGK[j] * (el + er)
        if j & 1:
            rg += _WG[j >> 1] * s
    return rk * h, abs((rk - rg) * h), ra * abs(h), rp * abs(h)


def _adaptive(f, lo: float, hi: float, cfg: QuadConfig, carries_err: bool):
    panel = _panel_prop if carries_err else _panel
    heap: list = []
    counter = 0
    # Running totals of (quadrature bound, propagated bound, |f| integral);
    # the decision to stop is re-checked with exact sums before returning.
    run = [0.0, 0.0, 0.0]

    def push(a, b, depth):
        nonlocal counter
        out = panel(f, a, b)
        prop = out[3] if carries_err else 0.0
        heapq.heappush(heap, (-(out[1]), counter, a, b, depth, out[0], out[1], out[2], prop))
        counter += 1
        run[0] += out[1]
        run[1] += prop
        run[2] += out[2]

    def totals():
        quad_err = math.fsum(item[6] for item in heap)
        prop_err = math.fsum(item[8] for item in heap)
        roundoff = 50.0 * _EPS * math.fsum(item[7] for item in heap)
        run[:] = [quad_err, prop_err, roundoff / (50.0 * _EPS)]
        return quad_err + prop_err + roundoff, roundoff

    def stalled(msg):
        value = math.fsum(item[5] for item in heap)
        return NonConvergence(f"quadrature on [{lo}, {hi}] {msg}", value, totals()[0])

    push(lo, hi, 0)
    while True:
        if run[0] + run[1] + 50.0 * _EPS * run[2] <= cfg.abs_tol * (1.0 + 1e-9):
            total_err, _ = totals()
            if total_err <= cfg.abs_tol:
                return math.fsum(item[5] for item in heap), total_err
        if 50.0 * _EPS * run[2] > cfg.abs_tol:
            _, roundoff = totals()
            if roundoff > cfg.abs_tol:
                raise stalled(f"cannot reach {cfg.abs_tol!r}: rounding floor is {roundoff!r}")
        worst = heapq.heappop(heap)
        a, b, depth = worst[2], worst[3], worst[4]
        m = 0.5 * (a + b)
        if depth + 1 > cfg.max_depth or (m - a) < cfg.min_width or not (a < m < b):
            heapq.heappush(heap, worst)
            raise stalled(f"stalled at depth {depth}")
        run[0] -= worst[6]
        run[1] -= worst[8]
        run[2] -= worst[7]
        push(a, m, depth + 1)
        push(m, b, depth + 1)


def integrate(f: Callable[[float], float], iv, cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Integrate ``f`` over ``iv`` to absolute tolerance ``cfg.abs_tol``.

    Returns ``(value, err_bound)``.  ``f`` is never evaluated outside the
    closed interval.  Raises :class:`NonConvergence` when the depth or width
    cap stops refinement first.
    """
    iv = _as_interval(iv)
    width = iv.width
    if width == 0.0:
        return 0.0, 0.0
    if width < cfg.min_width:
        mid = 0.5 * (iv.lo + iv.hi)
        fm = f(mid)
        return fm * width, abs(fm) * width
    return _adaptive(f, iv.lo, iv.hi, cfg, carries_err=False)


def integrate_nested(
    outer: Callable[[float, float], float],
    inner_limits: Callable[[float], Interval],
    inner_f: Callable[[float, float], float],
    iv,
    cfg: QuadConfig = DEFAULT_CONFIG,
) -> tuple[float, float]:
    """Integrate ``t1 -> outer(t1, int inner_f(t1, t2) dt2)`` over ``iv``.

    The inner integrals run at ``abs_tol / (10 * width)``; their bounds are
    pushed through ``outer`` by a symmetric difference (exact when ``outer``
    is affine in the inner value) and charged to the total bound.
    """
    iv = _as_interval(iv)
    width = iv.width
    if width == 0.0:
        return 0.0, 0.0
    inner_cfg = cfg.with_tol(cfg.abs_tol / (10.0 * width))

    def phi(t1: float):
        lim = _as_interval(inner_limits(t1))
        inner, inner_err = integrate(lambda t2: inner_f(t1, t2), lim, inner_cfg)
        val = outer(t1, inner)
        if inner_err == 0.0:
            return val, 0.0
        sens = 0.5 * abs(outer(t1, inner + inner_err) - outer(t1, inner - inner_err))
        return val, sens

    if width < cfg.min_width:
        mid = 0.5 * (iv.lo + iv.hi)
        fm, em = phi(mid)
        return fm * width, (abs(fm) + em) * width
    return _adaptive(phi, iv.lo, iv.hi, cfg, carries_err=True)
