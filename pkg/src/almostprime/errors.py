"""Exception types raised across the workbench."""
from __future__ import annotations


class AlmostPrimeError(Exception):
    """Base class for every error raised by this package."""


class InvalidInterval(AlmostPrimeError, ValueError):
    pass


class NonConvergence(AlmostPrimeError, ArithmeticError):
    """Raised when adaptive quadrature hits its depth or width cap.

    ``value`` and ``err_bound`` carry the best estimate reached.
    """

    def __init__(self, message: str, value: float, err_bound: float):
        super().__init__(f"{message} (best value {value!r}, bound {err_bound!r})")
        self.value = value
        self.err_bound = err_bound


class DomainError(AlmostPrimeError, ValueError):
    pass


class IntegrandPole(AlmostPrimeError, ArithmeticError):
    pass


class InfeasibleParams(AlmostPrimeError, ValueError):
    def __init__(self, reasons: list[str]):
        super().__init__("infeasible parameters: " + "; ".join(reasons))
        self.reasons = list(reasons)


class NoFeasibleDelta(AlmostPrimeError, ValueError):
    pass


class BadBisectionBracket(AlmostPrimeError, ValueError):
    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace or []


class RangeTooLarge(AlmostPrimeError, ValueError):
    pass


class NotFoundBelowCap(AlmostPrimeError, LookupError):
    def __init__(self, a: int, q: int, cap: int):
        super().__init__(f"no P2 congruent to {a} mod {q} below {cap}")
        self.a, self.q, self.cap = a, q, cap


class NonCoprimeInput(AlmostPrimeError, ValueError):
    pass


class LevelBelowZ(AlmostPrimeError, ValueError):
    pass


class PropertyViolation(AlmostPrimeError, AssertionError):
    def __init__(self, message: str, witness: int):
        super().__init__(f"{message} (witness n={witness})")
        self.witness = witness


class DegenerateCutoffs(AlmostPrimeError, ValueError):
    pass
