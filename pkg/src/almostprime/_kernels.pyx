# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops for the factor sieve and the progression scan.

Same signatures and results as :mod:`almostprime._pykernels`.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64


def factor_segment(i64 start, i64 end, const i64[::1] primes):
    """Omega and least prime factor for every n in [start, end).

    ``primes`` must contain every prime up to isqrt(end - 1).
    """
    cdef i64 width = end - start
    omega_arr = np.zeros(width, dtype=np.int8)
    lpf_arr = np.zeros(width, dtype=np.int64)
    # Product of the prime powers found so far; avoids dividing in the loop.
    found_arr = np.ones(width, dtype=np.int64)
    cdef signed char[::1] omega = omega_arr
    cdef i64[::1] lpf = lpf_arr
    cdef i64[::1] found = found_arr
    cdef Py_ssize_t k, np_ = primes.shape[0]
    cdef i64 p, pk, idx, n
    with nogil:
        for k in range(np_):
            p = primes[k]
            if p * p >= end:
                break
            idx = (p - start % p) % p
            while idx < width:
                if lpf[idx] == 0:
                    lpf[idx] = p
                idx += p
            pk = p
            while True:
                idx = (pk - start % pk) % pk
                while idx < width:
                    omega[idx] += 1
                    found[idx] *= p
                    idx += pk
                if pk > (end - 1) // p:
                    break
                pk *= p
        for idx in range(width):
            n = start + idx
            if found[idx] < n:
                omega[idx] += 1
                if lpf[idx] == 0:
                    lpf[idx] = n
    return omega_arr, lpf_arr


cdef inline i64 _gcd(i64 a, i64 b) nogil:
    cdef i64 t
    while b:
        t = a % b
        a = b
        b = t
    return a


def first_hits(const signed char[::1] omega, i64 q, i64 limit):
    """First n > 1, n <= limit, n = a (mod q) with omega[n] <= 2, per residue.

    ``omega`` is indexed by n itself and must cover 0..limit.  Entries are
    -1 for residues not coprime to q and for residues with no hit.
    """
    out_arr = np.full(q, -1, dtype=np.int64)
    cdef i64[::1] out = out_arr
    cdef i64 a, n
    if limit >= omega.shape[0]:
        raise ValueError("omega table shorter than limit")
    with nogil:
        for a in range(q):
            if _gcd(a, q) != 1:
                continue
            n = a
            if n <= 1:
                n += q
            while n <= limit:
                if omega[n] <= 2:
                    out[a] = n
                    break
                n += q
    return out_arr
