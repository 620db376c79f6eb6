"""Exception types shared across the optimization pipeline."""


class SibrisError(Exception):
    """Base class for library errors."""


class SubproblemInfeasible(SibrisError):
    """An SDP subproblem admits no feasible point for the current block values."""


class EhInfeasible(SibrisError):
    """Energy-harvesting demand exceeds what the incident beam can deliver."""


class QosInfeasible(SibrisError):
    """Primary-user rate floor cannot be met for the current beam."""


class PsInfeasible(SibrisError):
    """Power-splitting box and the protection ellipsoid do not intersect."""


class InitInfeasible(SibrisError):
    """No feasible starting point found for this drop."""


class ParseError(SibrisError):
    """Config file is syntactically invalid."""

    def __init__(self, message, lineno=None):
        super().__init__(message if lineno is None else f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationError(SibrisError):
    """Config parsed but violates invariants; message lists every violation."""
