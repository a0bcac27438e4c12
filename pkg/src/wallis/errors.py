"""Exception types shared across the library."""


class WallisError(Exception):
    """Base class for every library-specific error."""


class DomainError(WallisError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(WallisError, ValueError):
    """An index n lies outside the validity range of an inequality."""


class InconsistentTrend(WallisError, RuntimeError):
    """Scaled differences on the sample grid do not stabilise.

    Raised when the two largest grid points disagree by more than the trend
    tolerance without a clean decay to zero, which signals that the requested
    decay order k does not match the sequence.
    """


class DigitsNotCertified(WallisError, RuntimeError):
    """An enclosure failed to pin the requested digits at the precision cap."""
