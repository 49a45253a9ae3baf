"""Exception hierarchy shared by all photofit modules."""


class PhotofitError(Exception):
    """Base class for every error raised by this package."""


# --- raster / file format -------------------------------------------------

class PgmError(PhotofitError):
    """Base for PGM codec failures."""


class MalformedHeaderError(PgmError):
    pass


class TruncatedRasterError(PgmError):
    pass


class UnsupportedMaxvalError(PgmError):
    pass


class IntensityTextError(PhotofitError):
    """Base for intensity text-file parse failures."""


class CountMismatchError(IntensityTextError):
    pass


class ValueOutOfRangeError(IntensityTextError):
    pass


class NotAnIntegerError(IntensityTextError):
    pass


class DegenerateImageError(PhotofitError):
    """Image has a single intensity; no threshold can split it."""


# --- geometry -------------------------------------------------------------

class DimensionMismatchError(PhotofitError):
    pass


class OutOfBoundsError(PhotofitError):
    pass


class WindowOutOfBoundsError(OutOfBoundsError):
    """3x3 neighborhood would leave the image."""


class NoForegroundError(PhotofitError):
    """Binary mask contains no white pixel to anchor on."""


class NegativeCoordinateError(PhotofitError):
    """A placement equation produced a coordinate < 0.

    Signals the anchor is too close to the image border for these
    component dimensions.
    """

    def __init__(self, kind, coordinate):
        self.kind = kind
        self.coordinate = coordinate
        super().__init__(f"{kind}: placement coordinate {coordinate} is negative")


# --- catalog --------------------------------------------------------------

class UnknownKindError(PhotofitError):
    pass


class CatalogIoError(PhotofitError):
    pass


class CorruptManifestError(CatalogIoError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"manifest line {line_number}: {message}"
        super().__init__(message)


# --- blending / datapath --------------------------------------------------

class EmptyBoundaryError(PhotofitError):
    pass


class DegenerateDenominatorError(PhotofitError):
    """Both 3x3 windows are all black: CI + 2*FI == 0."""


# --- session workflow -----------------------------------------------------

class SessionError(PhotofitError):
    pass


class UnknownSessionError(SessionError):
    pass


class MissingKindError(SessionError):
    pass


class NotACandidateError(SessionError):
    pass


class StageNotReadyError(SessionError):
    pass


class IllegalActionError(SessionError):
    """Action not permitted in the session's current status."""
