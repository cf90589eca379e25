"""Explicit Selberg Lambda^2 upper-bound weights for the density omega_1.

omega_1(d) = prod_{p | d} (2 - 1/p) is the two-dimensional density that
appears when n runs over [M, y) and the progression is sifted at the same
time.  With g(d) = omega_1(d)/d and h(p) = g(p)/(1 - g(p)) the optimal
weights of level D1 (support d < sqrt(D1)) are

    lambda_d = mu(d) h(d)/g(d) * G_d(sqrt(D1)/d) / G(sqrt(D1), z),

where G_d sums h over squarefree m | P(z) coprime to d, and the upper-bound
weights are lambda+(e) = sum_{[d1, d2] = e} lambda_d1 lambda_d2.  Then
sum_e lambda+(e) g(e) = 1/G.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .._constants import EULER_GAMMA
from ..errors import LevelBelowZ, PropertyViolation
from .factor import primes_below

__all__ = [
    "SelbergSystem",
    "omega1",
    "selberg_weights",
    "sieve_inequality_check",
    "SieveCheck",
    "sigma_two_dim",
    "EXACT_LEVEL_LIMIT",
    "SCHEMA_VERSION",
]

EXACT_LEVEL_LIMIT = 10**4
SCHEMA_VERSION = "1"


def omega1(d: int, exact: bool = True):
    """prod_{p | d} (2 - 1/p) over the distinct primes of d."""
    out = Fraction(1) if exact else 1.0
    m = d
    p = 2
    while p * p <= m:
        if m % p == 0:
            out *= (Fraction(2 * p - 1, p) if exact else 2.0 - 1.0 / p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out *= (Fraction(2 * m - 1, m) if exact else 2.0 - 1.0 / m)
    return out


def sigma_two_dim(s: float) -> float:
    """s^2 / (8 e^{2 gamma}) for 0 < s <= 2."""
    if not 0.0 < s <= 2.0:
        raise ValueError("sigma is given here for 0 < s <= 2 only")
    return s * s / (8.0 * math.exp(2.0 * EULER_GAMMA))


@dataclass
class SelbergSystem:
    z: int
    level_D1: int
    primes: tuple
    weights: dict  # d -> lambda+(d), squarefree d | P(z), d < D1
    lambdas: dict  # d -> lambda_d, d < sqrt(D1)
    g_sum: object  # G(sqrt(D1), z)
    exact: bool
    identity_lhs: object = None  # sum_d lambda+(d) omega_1(d)/d
    asymptotic_ratio: float = math.nan  # (1/G) / (Vcal(z)/sigma(s))

    def omega1(self, d: int):
        return omega1(d, self.exact)

    @property
    def s(self) -> float:
        return math.log(self.level_D1) / math.log(self.z)

    def to_json(self) -> str:
        def num(v):
            return str(v) if isinstance(v, Fraction) else repr(float(v))

        payload = {
            "schema_version": SCHEMA_VERSION,
            "z": self.z,
            "level_D1": self.level_D1,
            "exact": self.exact,
            "g_sum": num(self.g_sum),
            "g_sum_float": float(self.g_sum),
            "identity_lhs": num(self.identity_lhs),
            "asymptotic_ratio": self.asymptotic_ratio,
            "weights": [
                {
                    "d": d,
                    "lambda_plus": num(w),
                    "lambda_plus_float": float(w),
                    "omega1": num(self.omega1(d)),
                }
                for d, w in sorted(self.weights.items())
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=False)


def _squarefree_below(primes, bound_sq: int) -> list[tuple[int, tuple]]:
    """Squarefree d | prod(primes) with d*d < bound_sq, with their prime sets."""
    out = [(1, ())]
    for p in primes:
        out += [(d * p, ps + (p,)) for d, ps in out if (d * p) ** 2 < bound_sq]
    out.sort()
    return out


def selberg_weights(z: int, D1: int, exact: bool | None = None) -> SelbergSystem:
    """Build the Lambda^2 system for omega_1 with sifting limit z and level D1."""
    if z < 2:
        raise ValueError("z must be at least 2")
    if D1 < z:
        raise LevelBelowZ(f"level D1={D1} is below z={z}")
    if D1 > 10**6:
        raise ValueError("D1 is capped at 10^6")
    if exact is None:
        exact = D1 <= EXACT_LEVEL_LIMIT
    one = Fraction(1) if exact else 1.0
    primes = tuple(primes_below(z).tolist())

    def g_p(p):
        return Fraction(2 * p - 1, p * p) if exact else (2.0 - 1.0 / p) / p

    h = {p: g_p(p) / (one - g_p(p)) for p in primes}
    inv1mg = {p: one / (one - g_p(p)) for p in primes}

    support = _squarefree_below(primes, D1)
    h_of = {}
    for d, ps in support:
        v = one
        for p in ps:
            v *= h[p]
        h_of[d] = v
    G = sum((h_of[d] for d, _ in support), 0 * one)

    lambdas = {}
    for d, ps in support:
        # G_d(sqrt(D1)/d): m coprime to d with (m d)^2 < D1.
        Gd = sum((h_of[m] for m, _ in support if (m * d) ** 2 < D1 and math.gcd(m, d) == 1), 0 * one)
        coef = one
        for p in ps:
            coef *= inv1mg[p]
        sign = -1 if len(ps) % 2 else 1
        lambdas[d] = sign * coef * Gd / G

    weights: dict = {}
    items = sorted(lambdas.items())
    for d1, l1 in items:
        for d2, l2 in items:
            e = d1 * d2 // math.gcd(d1, d2)
            weights[e] = weights.get(e, 0 * one) + l1 * l2
    weights = {d: w for d, w in sorted(weights.items()) if w != 0}

    lhs = sum((w * omega1(d, exact) / d for d, w in weights.items()), 0 * one)

    vcal = 1.0
    for p in primes:
        vcal *= (1.0 - 1.0 / p) ** 2
    s = math.log(D1) / math.log(z)
    ratio = math.nan
    if 0.0 < s <= 2.0:
        ratio = (1.0 / float(G)) / (vcal / sigma_two_dim(s))
    return SelbergSystem(
        z=z,
        level_D1=D1,
        primes=primes,
        weights=weights,
        lambdas=lambdas,
        g_sum=G,
        exact=exact,
        identity_lhs=lhs,
        asymptotic_ratio=ratio,
    )


@dataclass(frozen=True)
class SieveCheck:
    n_max: int
    min_slack: object
    argmin: int
    max_abs_weight: object


def sieve_inequality_check(system: SelbergSystem, n_max: int) -> SieveCheck:
    """Verify sum_{d | (n, P(z))} mu(d) <= sum_{d | n} lambda+(d) for n <= n_max.

    Both sides depend on n only through k(n) = gcd(n, P(z)), so the slack is
    evaluated once per distinct kernel (exactly, in rational mode) and then
    spread over n.  Raises :class:`PropertyViolation` with the least witness.
    """
    if not 1 <= n_max <= 10**7:
        raise ValueError("n_max must lie in [1, 10^7]")
    primes = system.primes
    # Kernel as an index: bit i set iff primes[i] | n.  Fine up to 62 primes;
    # beyond that fall back to the accumulation route.
    if len(primes) <= 62:
        mask = np.zeros(n_max + 1, dtype=np.int64)
        for i, p in enumerate(primes):
            mask[::p] |= np.int64(1) << i
        kernels, inverse = np.unique(mask[1:], return_inverse=True)
        slack_by_kernel = []
        for km in kernels.tolist():
            k = 1
            for i, p in enumerate(primes):
                if km >> i & 1:
                    k *= p
            lam = sum((w for d, w in system.weights.items() if k % d == 0), 0 * system.weights[1])
            mu = 1 if k == 1 else 0
            slack_by_kernel.append(lam - mu)
        exact_min = min(slack_by_kernel)
        # Least n whose kernel attains the exact minimum.
        attaining = [i for i, s in enumerate(slack_by_kernel) if s == exact_min]
        idx = int(np.argmax(np.isin(inverse, attaining)))
        min_slack, argmin = exact_min, idx + 1
    else:
        acc = np.zeros(n_max + 1)
        for d, w in system.weights.items():
            acc[d::d] += float(w)
        sifted = np.ones(n_max + 1, dtype=bool)
        for p in primes:
            sifted[::p] = False
        per_n = (acc - sifted)[1:]
        idx = int(np.argmin(per_n))
        min_slack, argmin = float(per_n[idx]), idx + 1
    max_abs = max(abs(w) for w in system.weights.values())
    tol = 0 if system.exact else 1e-9
    if min_slack < -tol:
        raise PropertyViolation("upper-bound sieve inequality fails", argmin)
    return SieveCheck(n_max=n_max, min_slack=min_slack, argmin=argmin, max_abs_weight=max_abs)
