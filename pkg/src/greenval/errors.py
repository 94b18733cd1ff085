"""Exception hierarchy for the evaluation engine.

Dataset problems get distinct classes so callers (CLI exit codes, HTTP
status mapping) can tell parse errors, schema violations and domain
violations apart without string matching.
"""

from __future__ import annotations


class GreenvalError(Exception):
    """Base class for all engine errors."""


class DomainError(GreenvalError, ValueError):
    """A value violates a domain invariant (negative amount, bad rate, ...)."""


class DatasetError(GreenvalError):
    """Base class for problems with a case-study document."""


class DatasetParseError(DatasetError):
    """The document is not well-formed JSON. Carries position information."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(DatasetError):
    """The document is valid JSON but violates the dataset schema."""


class DuplicateItemIdError(DatasetError):
    """Two cash-flow items within one scenario share an id."""


class MissingRebaseFactorError(DatasetError):
    """A (currency, year) pair has no rebasing factor in the context."""

    def __init__(self, currency: str, year: int):
        super().__init__(f"no rebase factor for ({currency}, {year})")
        self.currency = currency
        self.year = year


class UnitMismatchError(GreenvalError):
    """A quantity was supplied in a unit different from the rate's unit."""


class UnknownParameterError(GreenvalError):
    """A sweep or override referenced a parameter path that does not exist."""
