"""Exception types raised across the toolkit.

Every class derives from ``ValueError`` so callers that only care about
"bad input" can catch that, while the CLI maps each subclass to its own
exit status.
"""


class ColdGasError(ValueError):
    """Base class for all toolkit errors."""

    exit_code = 3


class DomainError(ColdGasError):
    """Inputs outside the physical domain of an operation."""

    exit_code = 3


class UnsizableError(ColdGasError):
    """Pressure vessel cannot satisfy the stress limit at any thickness."""

    exit_code = 4


class TleError(ColdGasError):
    """Malformed two-line element data.

    Carries the 1-based line number and the 1-based inclusive column span
    of the offending field.
    """

    exit_code = 5

    def __init__(self, message, line=None, columns=None):
        self.line = line
        self.columns = columns
        where = []
        if line is not None:
            where.append(f"line {line}")
        if columns is not None:
            where.append(f"columns {columns[0]}-{columns[1]}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ImpactError(ColdGasError):
    """State lies at or below the Earth's surface."""

    exit_code = 6


class StepSizeError(ColdGasError):
    """Integrator step too coarse for the requested energy tolerance."""

    exit_code = 7


class ProfileError(ColdGasError):
    """Nozzle area profile is malformed (no interior throat, bad ordering)."""

    exit_code = 8
