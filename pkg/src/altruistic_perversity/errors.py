"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from typing import Any


class PerversityError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PerversityError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidGameError(PerversityError, ValueError):
    """Payoffs or population masses violate the model's invariants."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class DivisionByZeroWelfare(PerversityError, ZeroDivisionError):
    """The best all-selfish equilibrium welfare is zero, so PI is undefined."""


class NotPrisonersDilemma(PerversityError, ValueError):
    """The payoffs do not satisfy S < P < R < T."""


class EquilibriumExistenceError(PerversityError, RuntimeError):
    """Enumeration returned an empty set; this is always an internal bug."""


class VerificationFailure(PerversityError, AssertionError):
    """A randomized property campaign found a counterexample."""

    def __init__(self, message: str, counterexample: dict[str, Any] | None = None, summary: Any = None):
        super().__init__(message)
        self.counterexample = counterexample
        self.summary = summary


class SpecFileError(PerversityError, ValueError):
    """A game specification file could not be parsed or validated."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
