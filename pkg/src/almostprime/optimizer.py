"""Search for the smallest theta whose bracket can still be made positive."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bound_model import BoundParams, BracketBreakdown, bracket, feasible
from .errors import BadBisectionBracket, InfeasibleParams, NoFeasibleDelta
from .quadrature import DEFAULT_CONFIG, QuadConfig

__all__ = ["DeltaSearch", "OptimizerResult", "delta_interval", "best_delta", "min_theta"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class DeltaSearch:
    theta: float
    delta: float
    total: float
    err: float
    best: BracketBreakdown
    evaluations: tuple

    @property
    def certified(self) -> bool:
        return self.total - self.err > 0.0


@dataclass
class OptimizerResult:
    theta_star: float
    delta_star: float
    margin: float
    margin_err: float
    trace: list = field(default_factory=list)
    tol: float = 0.0
    endpoint_checks: list = field(default_factory=list)

    def trace_rows(self) -> list[dict]:
        return [b.as_row() for b in self.trace]


def delta_interval(theta: float) -> tuple[float, float]:
    """Open interval of delta values satisfying M < y < D and lambda > 0."""
    lo = max(theta - 1.0, theta / 3.0, 0.0)
    hi = min(1.0, (6.0 * theta - 7.0) / 4.0)
    return lo, hi


def _evaluate(theta: float, delta: float, cfg: QuadConfig, log: list) -> BracketBreakdown | None:
    try:
        p = BoundParams(theta, delta)
    except ValueError:
        return None
    if not feasible(p)[0]:
        return None
    b = bracket(p, cfg)
    log.append(b)
    return b


def best_delta(
    theta: float,
    grid: int = 64,
    cfg: QuadConfig = DEFAULT_CONFIG,
    golden_iters: int = 40,
) -> DeltaSearch:
    """Maximise the bracket over delta at fixed ``theta``.

    A uniform scan of ``grid`` interior points locates the best cell; a
    golden-section search with ``golden_iters`` evaluations then refines it
    on the neighbouring cells.  The best evaluated point is returned.
    """
    if grid < 3:
        raise ValueError("grid must be at least 3")
    lo, hi = delta_interval(theta)
    if not lo < hi:
        raise NoFeasibleDelta(f"no feasible delta for theta={theta}: interval ({lo}, {hi})")
    log: list[BracketBreakdown] = []
    step = (hi - lo) / (grid + 1)
    points = [lo + (i + 1) * step for i in range(grid)]
    scored = []
    for d in points:
        b = _evaluate(theta, d, cfg, log)
        if b is not None:
            scored.append((b.total, d))
    if not scored:
        raise NoFeasibleDelta(f"no grid point is feasible for theta={theta}")
    _, d0 = max(scored)

    a, c = max(lo, d0 - step), min(hi, d0 + step)

    def score(d: float) -> float:
        b = _evaluate(theta, d, cfg, log)
        return -math.inf if b is None else b.total

    if golden_iters >= 2:
        x1 = c - _INV_PHI * (c - a)
        x2 = a + _INV_PHI * (c - a)
        f1, f2 = score(x1), score(x2)
        for _ in range(golden_iters - 2):
            if f1 >= f2:
                c, x2, f2 = x2, x1, f1
                x1 = c - _INV_PHI * (c - a)
                f1 = score(x1)
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + _INV_PHI * (c - a)
                f2 = score(x2)

    best = max(log, key=lambda b: (b.total, -b.params.delta))
    return DeltaSearch(theta, best.params.delta, best.total, best.err, best, tuple(log))


def _certified(theta: float, grid: int, cfg: QuadConfig, golden_iters: int) -> DeltaSearch | None:
    try:
        return best_delta(theta, grid, cfg, golden_iters)
    except (NoFeasibleDelta, InfeasibleParams):
        return None


def min_theta(
    lo: float,
    hi: float,
    theta_tol: float = 1e-4,
    cfg: QuadConfig = DEFAULT_CONFIG,
    grid: int = 64,
    golden_iters: int = 40,
) -> OptimizerResult:
    """Bisect on "best bracket over delta is certified positive".

    ``trace`` holds every bracket evaluated by the bisection steps; the two
    endpoint verifications are kept apart in ``endpoint_checks``.  The
    assumption that the optimal margin grows with theta is checked on the
    trace afterwards and a violation raises :class:`BadBisectionBracket`.
    """
    if not (1.0 < lo < 2.0 and 1.0 < hi < 2.0):
        raise ValueError("lo and hi must lie in (1, 2)")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got lo={lo}, hi={hi}")
    if not theta_tol > 0.0:
        raise ValueError("theta_tol must be positive")

    top = _certified(hi, grid, cfg, golden_iters)
    bottom = _certified(lo, grid, cfg, golden_iters)
    checks = []
    for s in (bottom, top):
        if s is not None:
            checks.append(s.best)
    if top is None or not top.certified:
        raise BadBisectionBracket(f"bracket is not certified at hi={hi}", checks)
    if bottom is not None and bottom.certified:
        raise BadBisectionBracket(f"bracket is already certified at lo={lo}", checks)

    trace: list[BracketBreakdown] = []
    steps: list[DeltaSearch] = []
    best = top
    a, b = lo, hi
    while b - a > theta_tol:
        mid = 0.5 * (a + b)
        s = _certified(mid, grid, cfg, golden_iters)
        if s is not None:
            trace.extend(s.evaluations)
            steps.append(s)
        if s is not None and s.certified:
            b, best = mid, s
        else:
            a = mid

    ordered = sorted(steps, key=lambda s: s.theta)
    for left, right in zip(ordered, ordered[1:]):
        if right.total + right.err < left.total - left.err:
            raise BadBisectionBracket(
                f"optimal margin decreases between theta={left.theta} and theta={right.theta}",
                trace,
            )

    return OptimizerResult(
        theta_star=b,
        delta_star=best.delta,
        margin=best.total,
        margin_err=best.err,
        trace=trace,
        tol=theta_tol,
        endpoint_checks=checks,
    )
