"""Segmented Omega / least-prime-factor tables and least-P2 searches."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..errors import NonCoprimeInput, NotFoundBelowCap, RangeTooLarge

__all__ = [
    "primes_below",
    "is_prime",
    "big_omega",
    "omega_at_most_two",
    "FactorTable",
    "build_factor_table",
    "AlmostPrimeRecord",
    "least_p2",
    "SurveyRow",
    "SurveyResult",
    "survey",
    "SEGMENT_WIDTH",
    "MAX_TABLE_ENTRIES",
]

SEGMENT_WIDTH = 1 << 20
MAX_TABLE_ENTRIES = 1 << 28
MAX_TABLE_END = 10**10
# Omega tables used by survey() stop here; beyond it scans fall back to
# trial division.
SURVEY_TABLE_BUDGET = 1 << 25


def primes_below(n: int) -> np.ndarray:
    """All primes p < n as an int64 array (odd-only sieve)."""
    if n <= 2:
        return np.zeros(0, dtype=np.int64)
    half = n // 2  # index i stands for 2i+1
    sieve = np.ones(half, dtype=bool)
    sieve[0] = False
    for i in range(1, (math.isqrt(n - 1) - 1) // 2 + 1):
        if sieve[i]:
            p = 2 * i + 1
            sieve[p * p // 2 :: p] = False
    odd = 2 * np.nonzero(sieve)[0].astype(np.int64) + 1
    odd = odd[odd < n]
    return np.concatenate(([2], odd)).astype(np.int64)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def big_omega(n: int) -> int:
    """Omega(n) by trial division; Omega(1) = 0."""
    if n < 1:
        raise ValueError("n must be positive")
    count = 0
    while n % 2 == 0:
        n //= 2
        count += 1
    p = 3
    while p * p <= n:
        while n % p == 0:
            n //= p
            count += 1
        p += 2
    return count + (n > 1)


def omega_at_most_two(n: int) -> int | None:
    """Omega(n) if it is at most 2, else None.

    Only trial-divides up to the cube root: if nothing divides there, n has
    at most two prime factors.
    """
    if n < 2:
        return 0 if n == 1 else None
    limit = 1
    while (limit + 1) ** 3 <= n:
        limit += 1
    p = 2
    while p <= limit:
        if n % p == 0:
            m = n // p
            if m == 1:
                return 1
            return 2 if is_prime(m) else None
        p += 1 if p == 2 else 2
    return 1 if is_prime(n) else 2


@dataclass
class FactorTable:
    start: int
    end: int  # inclusive
    omega: np.ndarray
    lpf: np.ndarray

    def _index(self, n: int) -> int:
        if not self.start <= n <= self.end:
            raise IndexError(f"{n} outside table range [{self.start}, {self.end}]")
        return n - self.start

    def omega_of(self, n: int) -> int:
        return int(self.omega[self._index(n)])

    def lpf_of(self, n: int) -> int:
        return int(self.lpf[self._index(n)])

    def factorize(self, n: int) -> list[int]:
        """Prime factors of n with multiplicity, ascending.

        Uses the table for n itself, then trial division by the least factor
        recursively on the cofactor (which may lie below ``start``).
        """
        p = self.lpf_of(n)
        out = [p]
        m = n // p
        while m > 1:
            if self.start <= m <= self.end:
                p = self.lpf_of(m)
            else:
                p = _smallest_factor(m, p)
            out.append(p)
            m //= p
        return out


def _smallest_factor(n: int, from_p: int = 2) -> int:
    p = max(2, from_p)
    if p == 2:
        if n % 2 == 0:
            return 2
        p = 3
    elif p % 2 == 0:
        p += 1
    while p * p <= n:
        if n % p == 0:
            return p
        p += 2
    return n


def build_factor_table(
    start: int, end: int, *, segment: int = SEGMENT_WIDTH, max_entries: int = MAX_TABLE_ENTRIES
) -> FactorTable:
    """Exact Omega and least prime factor for every n in [start, end]."""
    if not 2 <= start <= end:
        raise ValueError(f"need 2 <= start <= end, got [{start}, {end}]")
    if end > MAX_TABLE_END:
        raise RangeTooLarge(f"end {end} exceeds {MAX_TABLE_END}")
    count = end - start + 1
    if count > max_entries:
        raise RangeTooLarge(f"{count} entries exceed the budget of {max_entries}")
    base = primes_below(math.isqrt(end) + 1)
    omega = np.empty(count, dtype=np.int8)
    lpf = np.empty(count, dtype=np.int64)
    for lo in range(start, end + 1, segment):
        hi = min(lo + segment, end + 1)
        o, l = kernels.factor_segment(lo, hi, base)
        omega[lo - start : hi - start] = o
        lpf[lo - start : hi - start] = l
    return FactorTable(start, end, omega, lpf)


def _omega_prefix(limit: int) -> np.ndarray:
    """Omega for 0..limit indexed by n; entries 0 and 1 are set to 0."""
    table = build_factor_table(2, max(2, limit))
    out = np.zeros(limit + 1, dtype=np.int8)
    out[2:] = table.omega[: limit - 1]
    return out


@dataclass(frozen=True)
class AlmostPrimeRecord:
    q: int
    a: int
    n: int
    omega_n: int
    ratio: float


def _check_progression(a: int, q: int) -> None:
    if q < 2:
        raise ValueError("q must be at least 2")
    if not 1 <= a <= q:
        raise ValueError(f"need 1 <= a <= q, got a={a}, q={q}")
    if math.gcd(a, q) != 1:
        raise NonCoprimeInput(f"gcd({a}, {q}) != 1")


def _record(a: int, q: int, n: int, omega_n: int) -> AlmostPrimeRecord:
    return AlmostPrimeRecord(q=q, a=a, n=n, omega_n=omega_n, ratio=math.log(n) / math.log(q))


def least_p2(a: int, q: int, cap: int, *, start: int | None = None) -> AlmostPrimeRecord:
    """Least n > 1 with n = a (mod q), n <= cap and Omega(n) <= 2.

    ``start`` resumes the scan at a later member of the progression.
    """
    _check_progression(a, q)
    if cap < q:
        raise ValueError("cap must be at least q")
    n = a if start is None else start
    if n % q != a % q:
        raise ValueError("start must lie in the progression")
    if n <= 1:
        n += q
    while n <= cap:
        om = omega_at_most_two(n)
        if om is not None:
            return _record(a, q, n, om)
        n += q
    raise NotFoundBelowCap(a, q, cap)


@dataclass(frozen=True)
class SurveyRow:
    q: int
    worst_a: int
    p2: int
    omega: int
    ratio: float
    residues: int
    flagged: bool = False
    missing: tuple = ()


@dataclass
class SurveyResult:
    rows: list = field(default_factory=list)
    theta: float = 0.0
    cap_factor: int = 64
    max_ratio: float = 0.0
    argmax: tuple = (0, 0)
    exceed_count: int = 0
    flagged: list = field(default_factory=list)


def _thread_count() -> int:
    raw = os.environ.get("ALMOSTPRIME_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _survey_one(q: int, omega: np.ndarray, table_limit: int, cap_factor: int) -> SurveyRow:
    cap = cap_factor * q * q
    limit = min(table_limit, cap)
    hits = kernels.first_hits(omega, q, limit)
    worst_a, worst_n, worst_om = 0, -1, 0
    missing = []
    residues = 0
    for a in range(1, q + 1):
        r = a % q
        if math.gcd(a, q) != 1:
            continue
        residues += 1
        n = int(hits[r])
        if n > 0:
            om = int(omega[n])
        else:
            # Resume beyond the table by trial division.
            resume = r + ((limit - r) // q + 1) * q
            if resume <= 1:
                resume += q
            try:
                rec = least_p2(a, q, cap, start=resume) if resume <= cap else None
            except NotFoundBelowCap:
                rec = None
            if rec is None:
                missing.append(a)
                continue
            n, om = rec.n, rec.omega_n
        if n > worst_n:
            worst_a, worst_n, worst_om = a, n, om
    if missing:
        return SurveyRow(q, missing[0], -1, -1, math.inf, residues, True, tuple(missing))
    return SurveyRow(q, worst_a, worst_n, worst_om, math.log(worst_n) / math.log(q), residues)


def survey(q_lo: int, q_hi: int, theta: float, *, cap_factor: int = 64, threads: int | None = None) -> SurveyResult:
    """Worst least-P2 over reduced residues for every q in [q_lo, q_hi].

    Rows whose search reaches ``cap_factor * q^2`` without a hit are
    flagged and kept, never dropped.
    """
    if not 2 <= q_lo <= q_hi <= 10**6:
        raise ValueError("need 2 <= q_lo <= q_hi <= 10^6")
    table_limit = min(cap_factor * q_hi * q_hi, SURVEY_TABLE_BUDGET)
    omega = _omega_prefix(table_limit)
    qs = range(q_lo, q_hi + 1)
    threads = threads or _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda q: _survey_one(q, omega, table_limit, cap_factor), qs))
    else:
        rows = [_survey_one(q, omega, table_limit, cap_factor) for q in qs]

    result = SurveyResult(rows=rows, theta=theta, cap_factor=cap_factor)
    for row in rows:
        if row.flagged:
            result.flagged.append(row.q)
            continue
        if row.ratio > result.max_ratio:
            result.max_ratio = row.ratio
            result.argmax = (row.q, row.worst_a)
        if row.ratio > theta:
            result.exceed_count += 1
    return result
