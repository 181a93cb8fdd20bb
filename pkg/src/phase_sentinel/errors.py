"""Exception hierarchy shared by every module."""
from __future__ import annotations

__all__ = [
    "PhaseSentinelError",
    "DomainError",
    "OrderExhausted",
    "NotAnEquilibrium",
    "ParseError",
    "NotOddG",
    "NoConjugate",
    "BadExponent",
    "BranchError",
    "NeedsSeries",
    "WrongRegion",
    "StiffnessAbort",
    "EscapeAbort",
    "InconclusiveProbe",
    "NotXOnly",
    "UnhandledCase",
    "OutOfRegion",
]


class PhaseSentinelError(Exception):
    """Base class; the CLI maps any subclass to exit code 1."""


class DomainError(PhaseSentinelError, ValueError):
    pass


class OrderExhausted(PhaseSentinelError):
    pass


class NotAnEquilibrium(PhaseSentinelError):
    pass


class ParseError(PhaseSentinelError, ValueError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class NotOddG(PhaseSentinelError):
    pass


class NoConjugate(PhaseSentinelError):
    pass


class BadExponent(PhaseSentinelError, ValueError):
    pass


class BranchError(PhaseSentinelError):
    pass


class NeedsSeries(PhaseSentinelError):
    pass


class WrongRegion(PhaseSentinelError):
    pass


class StiffnessAbort(PhaseSentinelError):
    pass


class EscapeAbort(PhaseSentinelError):
    pass


class InconclusiveProbe(PhaseSentinelError):
    pass


class NotXOnly(PhaseSentinelError):
    pass


class UnhandledCase(PhaseSentinelError):
    pass


class OutOfRegion(PhaseSentinelError):
    pass
