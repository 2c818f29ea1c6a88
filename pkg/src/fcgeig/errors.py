"""Exception types raised across the package."""


class FCGError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(FCGError, ValueError):
    pass


class IndexOutOfRange(FCGError, IndexError):
    pass


class DuplicateEntry(FCGError, ValueError):
    pass


class OrderMismatch(FCGError, ValueError):
    pass


class NonPositiveForm(FCGError, ValueError):
    """B x^m' <= 0 at a nonzero x, i.e. B is not positive definite there."""


class ZeroVector(FCGError, ValueError):
    pass


class InfeasiblePoint(FCGError, ValueError):
    """A point expected on the surface {B x^m' = 1} is off it."""


class ZeroPreviousGradient(FCGError, ValueError):
    pass


class ZeroDirection(FCGError, ValueError):
    pass


class LineSearchFailed(FCGError, RuntimeError):
    pass


class InvalidSpec(FCGError, ValueError):
    pass


class ParseError(FCGError, ValueError):
    pass


class ConfigError(FCGError, ValueError):
    pass
