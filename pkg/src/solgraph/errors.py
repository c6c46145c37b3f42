"""Exception hierarchy shared by all solgraph modules."""

from __future__ import annotations


class SolgraphError(Exception):
    """Base class for every error raised by this package."""


class ArityCapExceeded(SolgraphError, ValueError):
    pass


class EmptyResult(SolgraphError, ValueError):
    """A substitution or restriction left no tuple in the relation."""


class ParseError(SolgraphError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownRelation(ParseError):
    pass


class ArityMismatch(ParseError):
    pass


class NotAffine(SolgraphError, ValueError):
    pass


class CapExceeded(SolgraphError):
    pass


class NotASolution(SolgraphError, ValueError):
    pass


class NotTight(SolgraphError, ValueError):
    pass


class MethodInapplicable(SolgraphError, ValueError):
    pass


class Unsatisfiable(SolgraphError):
    """The formula has no solution, so its solution graph is empty."""


class NotNonTight(SolgraphError, ValueError):
    pass


class AlreadyBijunctive(SolgraphError, ValueError):
    pass


class NoExpansion(SolgraphError, ValueError):
    pass


class NotAPath(SolgraphError, ValueError):
    pass


class NotClausal(SolgraphError, ValueError):
    pass


class MissingGadget(SolgraphError, KeyError):
    pass


class OddN(SolgraphError, ValueError):
    pass


class TooLarge(SolgraphError):
    pass


class NotAConfiguration(SolgraphError, ValueError):
    pass
