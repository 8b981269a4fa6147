"""Shared error hierarchy.

Every diagnosable failure is a TopactError subclass carrying the offending
data as attributes, so callers (and the CLI) can render witnesses without
string parsing.
"""


class TopactError(Exception):
    """Base class for all engine errors."""


class InternalCheckError(TopactError):
    """A cross-check that must always hold failed.

    Either the engine has a bug or an invalid object slipped past
    validation; never catch this to continue.
    """


class CapExceeded(TopactError):
    def __init__(self, what: str, count: int):
        super().__init__(f"{what}: cap exceeded at {count}")
        self.what = what
        self.count = count
