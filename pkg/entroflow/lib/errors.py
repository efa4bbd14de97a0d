from __future__ import annotations

from typing import Optional


class EntroflowError(Exception):
    """Base class for every error raised by entroflow."""


class InvariantError(EntroflowError, ValueError):
    """
    An operand violates one of its type invariants.

    - invariant: short name of the violated invariant (e.g. "hermitian")
    - magnitude: size of the violation, same units as the tolerance it broke
    """

    invariant: str = "invariant"

    def __init__(self, magnitude: float, tolerance: Optional[float] = None, detail: str = ""):
        self.magnitude = float(magnitude)
        self.tolerance = tolerance
        message = f"{self.invariant} violated: magnitude={self.magnitude:.3e}"
        if tolerance is not None:
            message += f" (tolerance={tolerance:.1e})"
        if detail:
            message += f"; {detail}"
        super().__init__(message)


class NotHermitian(InvariantError):
    invariant = "hermitian"


class TraceNotOne(InvariantError):
    invariant = "unit trace"


class NotPositive(InvariantError):
    invariant = "positive semidefinite"


class NotUnitary(InvariantError):
    invariant = "unitary"


class NotDoublyStochastic(InvariantError):
    invariant = "doubly stochastic"


class NotNormalized(InvariantError):
    invariant = "normalized distribution"


class DimMismatch(EntroflowError, ValueError):
    pass


class BadFactorIndex(EntroflowError, IndexError):
    pass


class PartitionNotBipartite(EntroflowError, ValueError):
    pass


class LengthMismatch(EntroflowError, ValueError):
    pass


class NegativeInput(EntroflowError, ValueError):
    pass


class ConvergenceFailure(EntroflowError, ArithmeticError):
    pass


class DegenerateDraw(EntroflowError, ArithmeticError):
    pass


class ConservationViolation(EntroflowError, ArithmeticError):
    pass


class ConfigInvalid(EntroflowError, ValueError):
    pass


class MatrixFileError(ConfigInvalid):
    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"Bad matrix file {path}: {reason}")
