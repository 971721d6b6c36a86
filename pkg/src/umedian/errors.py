"""Exception hierarchy. Each class maps to one CLI exit code."""


class UMedianError(Exception):
    exit_code = 1


class InvalidInputError(UMedianError, ValueError):
    exit_code = 2


class ResourceLimitError(UMedianError):
    exit_code = 3


class DegenerateInstanceError(UMedianError):
    exit_code = 4


class AuditFailure(UMedianError):
    exit_code = 5


class BoundViolation(AuditFailure):
    pass


class ConsistencyError(AuditFailure):
    """Internal invariant broken (e.g. a non-exact polynomial division)."""
