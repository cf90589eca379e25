import json
import math
from fractions import Fraction

import pytest

from almostprime.errors import LevelBelowZ
from almostprime.lab.selberg import omega1, selberg_weights, sieve_inequality_check, sigma_two_dim


def mobius(n):
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def test_omega1_values():
    assert omega1(1) == 1
    assert omega1(6) == Fraction(3, 2) * Fraction(5, 3)
    assert omega1(12) == omega1(6)
    assert omega1(35, exact=False) == pytest.approx((2 - 1 / 5) * (2 - 1 / 7))


def test_default_system():
    s = selberg_weights(30, 900)
    assert s.exact
    assert float(s.g_sum) == pytest.approx(15.792185846886198, rel=1e-15)
    assert s.weights[1] == 1
    assert max(abs(w) for w in s.weights.values()) <= 1
    assert len(s.weights) == 104
    assert s.identity_lhs == 1 / s.g_sum
    assert all(d * d < 900 for d in s.lambdas)
    assert all(math.prod(p for p in s.primes if d % p == 0) == d for d in s.weights)


def test_lambda_plus_is_lcm_convolution():
    s = selberg_weights(13, 200)
    for e, w in s.weights.items():
        ref = sum(
            (l1 * l2 for d1, l1 in s.lambdas.items() for d2, l2 in s.lambdas.items() if math.lcm(d1, d2) == e),
            Fraction(0),
        )
        assert w == ref


def test_sieve_inequality_against_direct_sums():
    s = selberg_weights(20, 300)
    P = math.prod(s.primes)
    for n in range(1, 3000):
        k = math.gcd(n, P)
        lhs = sum(mobius(d) for d in range(1, k + 1) if k % d == 0)
        rhs = sum(w for d, w in s.weights.items() if n % d == 0)
        assert lhs <= rhs
    chk = sieve_inequality_check(s, 3000)
    assert chk.min_slack >= 0 and chk.argmin >= 1


def test_float_mode_identity():
    s = selberg_weights(100, 20000)
    assert not s.exact
    assert abs(s.identity_lhs - 1 / s.g_sum) < 1e-12
    assert sieve_inequality_check(s, 10**5).min_slack > -1e-9


def test_asymptotic_ratio_trend():
    # The finite-z ratio approaches 1 slowly; it rises with z at s = 2.
    ratios = [selberg_weights(z, z * z, exact=False).asymptotic_ratio for z in (30, 60, 100)]
    assert 0.35 < ratios[0] < 0.45
    assert ratios[0] < ratios[1] < ratios[2] < 1


def test_sigma():
    assert sigma_two_dim(2.0) == pytest.approx(4 / (8 * math.exp(2 * 0.5772156649015329)))
    with pytest.raises(ValueError):
        sigma_two_dim(2.5)


def test_errors():
    with pytest.raises(LevelBelowZ):
        selberg_weights(30, 20)
    with pytest.raises(ValueError):
        selberg_weights(30, 10**7)


def test_json_round_trip():
    s = selberg_weights(30, 900)
    payload = json.loads(s.to_json())
    assert payload["schema_version"] == "1"
    assert Fraction(payload["g_sum"]) == s.g_sum
    assert {row["d"]: Fraction(row["lambda_plus"]) for row in payload["weights"]} == s.weights
