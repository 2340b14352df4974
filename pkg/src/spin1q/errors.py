"""Exception hierarchy shared by all spin1q modules."""

from __future__ import annotations


class Spin1Error(Exception):
    """Base class for every error raised by spin1q."""


class InvalidInputError(Spin1Error, ValueError):
    """An argument violates the invariants of its type."""


class NotPSDError(InvalidInputError):
    """A matrix required to be positive semi-definite is not."""


class DomainError(Spin1Error, ValueError):
    """A scalar argument lies outside the domain of a function."""


class ConsistencyError(Spin1Error, RuntimeError):
    """Two independent routes to the same quantity disagree."""


class StateFileError(InvalidInputError):
    """A state document could not be turned into a state.

    ``location`` is a JSON-path-like pointer (``$.matrix[1][2]``) to the
    offending element, or ``None`` for whole-document problems.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class StateSyntaxError(StateFileError):
    """The document is not well-formed JSON."""


class StateSchemaError(StateFileError):
    """The document is valid JSON but has the wrong structure."""


class StateInvariantError(StateFileError):
    """The payload parses but violates a physical invariant.

    ``invariant`` is one of ``"hermitian"``, ``"trace"``, ``"psd"``,
    ``"norm"``, ``"symmetric"``, ``"bloch"``.
    """

    def __init__(self, invariant: str, message: str, location: str | None = None):
        self.invariant = invariant
        super().__init__(message, location)
