"""Exception types raised across the package."""


class GestureRpsError(Exception):
    """Base class for all errors raised by this package."""


# imaging
class EmptyImage(GestureRpsError):
    pass


class DegenerateHistogram(GestureRpsError):
    """All pixels share one intensity; no threshold splits the histogram."""


class DimensionMismatch(GestureRpsError):
    pass


class ImageTooSmall(GestureRpsError):
    pass


# geometry
class EmptyPointSet(GestureRpsError):
    pass


# recognition
class CalibrationRejected(GestureRpsError):
    """No usable hand in view while calibrating."""


class NotCalibrated(GestureRpsError):
    pass


# game / config
class RoundNotPlayable(GestureRpsError):
    """A move outside rock/paper/scissors cannot be scored."""


class ConfigInvalid(GestureRpsError):
    pass


class IllegalTransition(GestureRpsError):
    pass


# i18n
class EmptyKey(GestureRpsError):
    pass


class MalformedLine(GestureRpsError):
    def __init__(self, line_number: int, line: str = ""):
        super().__init__(f"line {line_number} has no '=' separator: {line!r}")
        self.line_number = line_number
        self.line = line


# service
class BackgroundMissing(GestureRpsError):
    """A live frame arrived before any background frame was stored."""
