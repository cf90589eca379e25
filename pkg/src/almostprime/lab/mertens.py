from __future__ import annotations

import math
from dataclasses import dataclass

from .._constants import EULER_GAMMA
from .factor import primes_below

__all__ = ["MertensProducts", "mertens_products"]


@dataclass(frozen=True)
class MertensProducts:
    z: int
    V: float  # prod_{p<z} (1 - 1/p)
    Vcal: float  # V^2, the two-dimensional product
    V_asymptotic: float  # e^-gamma / log z
    Vcal_asymptotic: float  # e^-2gamma / log^2 z

    @property
    def mertens_ratio(self) -> float:
        """V(z) log z e^gamma, which tends to 1."""
        return self.V * math.log(self.z) * math.exp(EULER_GAMMA)


def mertens_products(z: int) -> MertensProducts:
    """Exact (floating) Mertens products over primes p < z."""
    if not 3 <= z <= 10**8:
        raise ValueError("z must lie in [3, 10^8]")
    v = 1.0
    for p in primes_below(z).tolist():
        v *= 1.0 - 1.0 / p
    logz = math.log(z)
    return MertensProducts(
        z=z,
        V=v,
        Vcal=v * v,
        V_asymptotic=math.exp(-EULER_GAMMA) / logz,
        Vcal_asymptotic=math.exp(-2.0 * EULER_GAMMA) / (logz * logz),
    )
