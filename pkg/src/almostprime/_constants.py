"""Numerical constants shared by the analytic modules."""
from __future__ import annotations

from decimal import Decimal

# Euler-Mascheroni constant, 40 significant digits.
EULER_GAMMA_STR = "0.5772156649015328606065120900824024310422"
EULER_GAMMA_DEC = Decimal(EULER_GAMMA_STR)
EULER_GAMMA = float(EULER_GAMMA_DEC)

# exp(gamma) rounded once from the high-precision literal.
E_GAMMA = float(EULER_GAMMA_DEC.exp())

# Relative precision of the double-rounded constants above.
CONSTANT_REL_ERR = 2.0 ** -52

__all__ = ["EULER_GAMMA", "EULER_GAMMA_DEC", "EULER_GAMMA_STR", "E_GAMMA", "CONSTANT_REL_ERR"]
