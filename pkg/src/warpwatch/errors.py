"""Exception and warning types raised across the package."""


class WarpWatchError(ValueError):
    """Base class for validation errors."""


class MalformedTimestamp(WarpWatchError):
    def __init__(self, message, line=None, offset=None):
        self.line = line
        self.offset = offset
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", offset {offset}" if offset is not None else "") + ")"
        super().__init__(message + where)


class EndNotAfterStart(WarpWatchError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"{message} (line {line})")


class MissingHeader(WarpWatchError):
    pass


class TimestampOverflow(WarpWatchError):
    pass


class CueBeyondDuration(WarpWatchError):
    pass


class InvalidSpeed(WarpWatchError):
    pass


class InfeasibleTarget(WarpWatchError):
    pass


class OutOfRange(WarpWatchError):
    pass


class CueOutsidePlan(WarpWatchError):
    pass


class EmptyCorpus(WarpWatchError):
    pass


class EmptyTrack(WarpWatchError):
    pass


class DegenerateData(WarpWatchError):
    pass


class ZeroLengthOutput(UserWarning):
    """A segment rounded to 0 ms of output and was stretched to 1 ms."""


class SpeedWarning(UserWarning):
    """A speed is legal but outside the useful fast-forward range."""


class NonConvergence(UserWarning):
    """The optimizer hit its iteration cap; the best-so-far result is returned."""


__all__ = [name for name, obj in globals().items() if isinstance(obj, type) and issubclass(obj, Exception)]
