"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LocalDiffError(Exception):
    """Base class for all errors raised by :mod:`localdiff`."""


class EmptyInput(LocalDiffError, ValueError):
    pass


class DuplicateValue(LocalDiffError, ValueError):
    def __init__(self, value):
        super().__init__(f"duplicate value: {value}")
        self.value = value


class TooSmall(LocalDiffError, ValueError):
    pass


class TooLarge(LocalDiffError, ValueError):
    pass


class InvalidMoment(LocalDiffError, ValueError):
    pass


class NoDumbbells(LocalDiffError, ValueError):
    pass


class UnknownClass(LocalDiffError, KeyError):
    pass


class BadLength(LocalDiffError, ValueError):
    pass


class BadK(LocalDiffError, ValueError):
    pass


class BadParameters(LocalDiffError, ValueError):
    pass


class InsufficientSurvivors(LocalDiffError, RuntimeError):
    pass


class InvariantViolation(LocalDiffError, AssertionError):
    """An internal consistency check failed. Always a bug."""
