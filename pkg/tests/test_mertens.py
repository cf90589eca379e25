from fractions import Fraction

import pytest

from almostprime.lab.mertens import mertens_products


def test_small_z_exact_product():
    # primes below 11: 2, 3, 5, 7
    assert mertens_products(11).V == pytest.approx(float(Fraction(8, 35)), rel=1e-15)
    assert mertens_products(12).V == pytest.approx(float(Fraction(16, 77)), rel=1e-15)


def test_two_dimensional_is_square():
    for z in (3, 100, 10**4, 10**6):
        m = mertens_products(z)
        assert m.Vcal == m.V**2


def test_convergence_toward_one():
    ratios = [mertens_products(z).mertens_ratio for z in (10**3, 10**5, 10**6)]
    assert all(0.98 < r < 1.02 for r in ratios[1:])
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)


def test_asymptotic_fields():
    m = mertens_products(10**6)
    assert m.V == pytest.approx(m.V_asymptotic, rel=1e-3)
    assert m.Vcal_asymptotic == pytest.approx(m.V_asymptotic**2)


@pytest.mark.parametrize("z", [2, 10**8 + 1])
def test_range(z):
    with pytest.raises(ValueError):
        mertens_products(z)
