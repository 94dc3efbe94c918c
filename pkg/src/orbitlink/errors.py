"""Exception hierarchy shared by the library and the CLI."""


class OrbitlinkError(Exception):
    """Base class for every error raised by orbitlink."""


class DomainError(OrbitlinkError, ValueError):
    """An argument lies outside the region where a formula is defined."""


class DegenerateGeometry(OrbitlinkError, ArithmeticError):
    """A branch was reached that requires a non-degenerate configuration."""


class ConvergenceError(OrbitlinkError, ArithmeticError):
    """A truncated series did not converge within its term budget."""


class QuadratureError(OrbitlinkError, ArithmeticError):
    """Adaptive quadrature could not meet its tolerance."""


class Unreachable(OrbitlinkError):
    """A search target cannot be met inside the allowed range."""


class ParseError(OrbitlinkError):
    """A configuration document is malformed."""


class ValidationError(OrbitlinkError, ValueError):
    """A configuration value violates a model invariant."""

    def __init__(self, key, message):
        self.key = key
        self.detail = message
        super().__init__(f"{key}: {message}")
