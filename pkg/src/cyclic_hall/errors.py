class CyclicHallError(Exception):
    """Base class for library errors."""


class SizeLimitError(CyclicHallError):
    """Input exceeds a configured size or enumeration limit."""


class InvariantError(CyclicHallError):
    """An internal consistency check failed; usually a convention bug."""


class SpanningError(InvariantError):
    """Monomials in the semisimple generators failed to be unitriangular."""


class WindowError(CyclicHallError):
    """A truncation window is too small for the requested computation."""
