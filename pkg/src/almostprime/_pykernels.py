"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

import math

import numpy as np


def factor_segment(start: int, end: int, primes: np.ndarray):
    """Omega and least prime factor for every n in [start, end)."""
    width = end - start
    omega = np.zeros(width, dtype=np.int8)
    lpf = np.zeros(width, dtype=np.int64)
    rem = np.arange(start, end, dtype=np.int64)
    for p in primes.tolist():
        if p * p >= end:
            break
        first = (-start) % p
        sl = slice(first, width, p)
        block = lpf[sl]
        block[block == 0] = p
        # Each power p^k dividing n contributes one factor.
        pk = p
        while pk < end:
            off = (-start) % pk
            omega[off::pk] += 1
            rem[off::pk] //= p
            if pk > (end - 1) // p:
                break
            pk *= p
    big = rem > 1
    omega[big] += 1
    unset = big & (lpf == 0)
    lpf[unset] = rem[unset]
    return omega, lpf


def first_hits(omega: np.ndarray, q: int, limit: int) -> np.ndarray:
    """First n > 1, n <= limit, n = a (mod q) with omega[n] <= 2, per residue."""
    if limit >= omega.shape[0]:
        raise ValueError("omega table shorter than limit")
    out = np.full(q, -1, dtype=np.int64)
    residues = np.array([a for a in range(q) if math.gcd(a, q) == 1], dtype=np.int64)
    if residues.size == 0:
        return out
    good = omega[: limit + 1] <= 2
    pending = residues
    row = 0
    rows = 16
    while pending.size and row * q <= limit:
        ns = pending[None, :] + q * np.arange(row, row + rows, dtype=np.int64)[:, None]
        valid = (ns <= limit) & (ns > 1)
        hit = np.zeros(ns.shape, dtype=bool)
        hit[valid] = good[ns[valid]]
        found = hit.any(axis=0)
        first = hit.argmax(axis=0)
        out[pending[found]] = ns[first[found], np.nonzero(found)[0]]
        pending = pending[~found]
        row += rows
        rows *= 2
    return out
