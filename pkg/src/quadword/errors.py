"""Exception types raised across the package."""


class QuadwordError(Exception):
    """Base class for all package errors."""


class ResourceLimitError(QuadwordError):
    """A requested length exceeds the configured materialization cap."""


class HorizonError(QuadwordError):
    """A query lies beyond the range where a finite computation is trustworthy."""


class SearchHorizonError(HorizonError):
    """An anchor search ran past its scan limit without a qualifying prefix."""


class RationalSlopeError(QuadwordError, ValueError):
    """A slope expansion is too short to define a Sturmian prefix."""
