"""Exception types shared across the library.

Validity and integrability errors carry the violated inequality as text so
front ends can explain why a request left the finite-orthogonality window.
"""


class FiniteConeError(Exception):
    """Base class for all library errors."""


class PoleError(FiniteConeError):
    """Evaluation at a pole of a special function."""


class DomainError(FiniteConeError):
    """Input outside the mathematical domain of the operation."""


class ValidityError(FiniteConeError):
    """Parameter set violates an orthogonality validity window."""

    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        msg = f"validity window violated: requires {inequality}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class IntegrabilityError(FiniteConeError):
    """Weighted integral diverges for the requested degree."""

    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        msg = f"integral diverges: requires {inequality}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DegenerateParamError(FiniteConeError):
    """Parameter choice makes a construction degenerate (vanishing denominator
    or identically-zero family member)."""


class DimensionMismatch(FiniteConeError):
    """Operands live over different variable sets."""


class ParityError(FiniteConeError):
    """Polynomial term degree incompatible with the requested homogenization."""


class UnsupportedDimension(FiniteConeError):
    """Ambient dimension outside the supported set."""


class QNotZeroError(FiniteConeError):
    """Operation defined only for q = 0 (eigenvalues otherwise depend on the
    angular degree as well)."""


class QNotMinusOneError(FiniteConeError):
    """Operation defined only for q = -1."""


class DegenerateDataError(FiniteConeError):
    """Not enough usable data points for a fit."""
