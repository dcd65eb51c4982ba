"""Exception hierarchy. The CLI maps :class:`NoSuchStateError` to exit code 2."""


class RadialError(Exception):
    """Base class for all solver errors."""


class DomainError(RadialError, ValueError):
    pass


class ParseError(RadialError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InsufficientDataError(RadialError, ValueError):
    pass


class UnsupportedChannelError(RadialError):
    pass


class NonNormalizableError(RadialError):
    pass


class ModeUnavailableError(RadialError):
    pass


class RmaxTooSmallError(RadialError):
    def __init__(self, message, suggested_r_max=None):
        self.suggested_r_max = suggested_r_max
        super().__init__(message)


class NoSuchStateError(RadialError):
    pass


class ConvergenceError(RadialError):
    def __init__(self, message, bracket=None):
        self.bracket = bracket
        super().__init__(message)


class PrecisionError(RadialError):
    pass


class ExtrapolationError(RadialError):
    pass
