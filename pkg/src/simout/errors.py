"""Exception hierarchy.

Every error raised by the library derives from :class:`SimoutError`, which is
also a :class:`ValueError` so callers that only care about "bad input" can
catch that. Errors carry a ``context`` dict (path, row, run, output, fm...)
that is rendered as a message prefix and can be extended while propagating.
"""

from __future__ import annotations


class SimoutError(ValueError):
    def __init__(self, message: str = "", **context):
        super().__init__(message)
        self.message = message
        self.context = dict(context)

    def __str__(self) -> str:
        if not self.context:
            return self.message
        where = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"[{where}] {self.message}"

    def with_context(self, **context) -> "SimoutError":
        """Return a copy of this error with extra context prepended."""
        err = type(self).__new__(type(self))
        SimoutError.__init__(err, self.message, **{**context, **self.context})
        err.__cause__ = self
        return err


# ingest
class ParseError(SimoutError):
    pass


class RaggedRows(ParseError):
    pass


class NonNumericToken(ParseError):
    pass


class EmptyFile(ParseError):
    pass


class DimensionMismatch(SimoutError):
    pass


class EmptyRunSet(SimoutError):
    pass


# focal
class SsIdxOutOfRange(SimoutError):
    pass


class IterOutOfRange(SimoutError):
    pass


class InvalidExtractor(SimoutError):
    pass


# numerics
class DomainError(SimoutError):
    pass


class NoConvergence(SimoutError, ArithmeticError):
    pass


# stats / compare
class TooFewObservations(SimoutError):
    pass


class DegenerateSample(SimoutError):
    pass


class SampleSizeOutOfRange(SimoutError):
    pass


class DegenerateInput(SimoutError):
    pass


class EmptyMatrix(SimoutError):
    pass


class FMNameMismatch(SimoutError):
    pass


class ConfigError(SimoutError):
    pass
