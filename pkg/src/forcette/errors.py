"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ForcingError(Exception):
    """Base class for all errors raised by the package."""


class UnknownElementError(ForcingError, ValueError):
    def __init__(self, element, where: str = "poset"):
        super().__init__(f"unknown element {element!r} in {where}")
        self.element = element


class CapExceededError(ForcingError):
    """An exhaustive enumeration would exceed its configured cap."""


class ParseError(ForcingError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        loc = f"line {line}, column {column}: " if line else ""
        super().__init__(loc + message)
        self.line = line
        self.column = column


class UnknownIdentifierError(ParseError):
    pass


class NotFunctionalError(ForcingError, ValueError):
    pass


class UniverseError(ForcingError):
    """A formula mentions a name constant outside the quantifier universe."""


class NotGenericError(ForcingError):
    pass


class HypothesisError(ForcingError):
    """The covering hypothesis of the induced-topology lemma fails."""


class BasisAxiomError(ForcingError):
    pass


class PresheafError(ForcingError):
    """Restriction maps are missing or not functorial."""
