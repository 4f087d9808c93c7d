"""Exception types raised across the package."""


class FridgeError(Exception):
    """Base class for all package errors."""


class LabelCollisionError(FridgeError, ValueError):
    pass


class DegenerateRequestError(FridgeError, ValueError):
    pass


class DimensionMismatchError(FridgeError, ValueError):
    pass


class DensityError(FridgeError, ValueError):
    """An operator failed a density-matrix check.

    ``kind`` is one of ``"hermiticity"``, ``"trace"``, ``"positivity"`` or
    ``"shape"``; ``magnitude`` is the offending deviation.
    """

    def __init__(self, kind: str, magnitude: float, message: str = ""):
        self.kind = kind
        self.magnitude = magnitude
        super().__init__(message or f"{kind} violation of magnitude {magnitude:.3e}")


class DomainError(FridgeError, ValueError):
    pass


class DegenerateRegimeError(DomainError):
    """Temperature ordering leaves the cooling bound undefined (Tr <= Tc)."""


class NotARefrigeratorError(FridgeError, ValueError):
    pass


class DegenerateSteadyStateError(FridgeError, ArithmeticError):
    pass


class IntegrationDivergedError(FridgeError, ArithmeticError):
    def __init__(self, time: float, reason: str):
        self.time = time
        super().__init__(f"integration diverged at t={time:.6g}: {reason}")
