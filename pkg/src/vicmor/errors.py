"""Exception hierarchy shared across the package.

Each family maps onto one CLI exit code: parameter problems exit 1,
numerical failures exit 2, file-system problems are plain ``OSError`` (3).
"""


class VicmorError(Exception):
    """Base class for all package errors."""


class ParameterError(VicmorError, ValueError):
    """One or more parameter invariants are violated.

    ``violations`` holds ``(field, value, message)`` triples so callers can
    report every problem at once instead of stopping at the first.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [("", None, violations)]
        self.violations = list(violations)
        super().__init__("; ".join(msg for _, _, msg in self.violations))


class NumericalError(VicmorError, ArithmeticError):
    """Base class for failures of a numerical route."""


class SingularityError(NumericalError):
    """A closed-form denominator vanishes (or nearly so)."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(message)


class ResonanceDegeneracyError(NumericalError):
    """The first-order linear system is singular and cannot be solved."""

    def __init__(self, message, condition_number):
        self.condition_number = condition_number
        super().__init__(f"{message} (condition number {condition_number:.3e})")


class MultiplicityError(NumericalError):
    """The generator has more than one stationary state."""

    def __init__(self, nullity):
        self.nullity = nullity
        super().__init__(
            f"steady state is not unique: null space dimension {nullity} (expected 1)"
        )


class DivergenceError(NumericalError):
    """Time integration produced non-finite entries."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"integration diverged at t = {t:.6g}/gamma")
