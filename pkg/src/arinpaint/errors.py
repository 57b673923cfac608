"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`InpaintingError`, which itself is a :class:`ValueError` so callers
that only catch ``ValueError`` keep working.
"""


class InpaintingError(ValueError):
    pass


class BoundsError(InpaintingError, IndexError):
    pass


class ShapeError(InpaintingError):
    pass


class PlacementError(InpaintingError):
    """Requested gaps cannot be placed in the signal."""


class InsufficientDataError(InpaintingError):
    """Segment or context is too short for the requested model order."""


class NumericError(InpaintingError):
    pass


class SolverError(InpaintingError):
    pass


class ConfigError(InpaintingError):
    pass


class UndefinedReferenceError(InpaintingError):
    """SDR requested against a silent reference."""


class ValidationError(InpaintingError):
    pass


class FormatError(InpaintingError):
    pass


class ChannelError(FormatError):
    pass
