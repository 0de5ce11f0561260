"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """A parameter is outside the range an operation accepts."""


class UnsupportedOrderingError(InvalidArgumentError):
    """The requested ordering cannot be built for the given cube size."""
