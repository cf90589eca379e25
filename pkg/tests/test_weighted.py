import math
import random

import pytest

from almostprime.bound_model import BoundParams
from almostprime.errors import DegenerateCutoffs, NonCoprimeInput
from almostprime.lab.weighted import desk_cutoffs, weighted_sum


def naive_W(x, q, a, z, y, lam):
    """Direct float evaluation of the weighted sum from factorizations."""
    total = 0.0
    for n in range(a, x + 1, q):
        ps, m, p = set(), n, 2
        while p * p <= m:
            while m % p == 0:
                ps.add(p)
                m //= p
            p += 1
        if m > 1:
            ps.add(m)
        if any(p < z for p in ps):
            continue
        total += 1.0 - sum(1.0 - math.log(p) / math.log(y) for p in ps if z <= p < y) / lam
    return total


def test_headline_instance():
    r = weighted_sum(10**4, 101, 3)
    assert r.forms_agree and r.W == r.W_expansion
    assert r.W == pytest.approx(9.075752774996959, abs=1e-12)
    assert r.W == pytest.approx(naive_W(r.x, r.q, r.a, r.z, r.y, r.lam), abs=1e-10)
    assert r.count_p2 == 33
    assert r.p2_implied and r.count_p2 >= 1
    assert not r.negative_violations


def test_random_free_cutoffs():
    rng = random.Random(7)
    for _ in range(8):
        q = rng.randrange(20, 200)
        a = rng.randrange(1, q)
        if math.gcd(a, q) != 1:
            continue
        x = rng.randrange(q * 20, q * 200)
        z = rng.randrange(2, 12)
        y = rng.randrange(z + 5, 200)
        if 3 - math.log(x) / math.log(y) <= 0:
            continue
        r = weighted_sum(x, q, a, z=z, y=y)
        assert r.forms_agree and r.W == r.W_expansion
        assert r.W == pytest.approx(naive_W(x, q, a, z, y, r.lam), abs=1e-9)
        assert not r.negative_violations


def test_split_sums_to_total_prime_part():
    r = weighted_sum(50000, 211, 5)
    total = math.fsum((1 - math.log(p) / math.log(r.y)) * k for p, k in r.S_Ap.items())
    assert sum(r.split) == pytest.approx(total, abs=1e-12)
    assert len(r.breakdown_rows()) == len(r.S_Ap)


def test_desk_cutoffs_shape():
    c = desk_cutoffs(10**5, 211, BoundParams(1.8345, 0.86))
    assert 2 <= c.z < c.y
    assert c.lam == pytest.approx(3 - math.log(10**5) / math.log(c.y))


def test_errors():
    with pytest.raises(NonCoprimeInput):
        weighted_sum(1000, 10, 4)
    with pytest.raises(DegenerateCutoffs):
        weighted_sum(10**6, 101, 3, z=5, y=6)
    with pytest.raises(ValueError):
        weighted_sum(1000, 101, 3, z=5)
