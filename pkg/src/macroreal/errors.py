"""Exception types raised across the package."""


class MacrorealError(Exception):
    """Base class for all package errors."""


class DomainError(MacrorealError, ValueError):
    """A parameter lies outside its allowed range."""


class NullEventError(MacrorealError):
    """Conditioning on an outcome whose probability is (numerically) zero."""


class ResourceError(MacrorealError):
    """Requested enumeration is too large to perform."""


class NonMonotoneError(MacrorealError):
    """The lambda profile is not monotone, so bisection is not applicable."""


class UnknownSpecError(MacrorealError, KeyError):
    """No inequality is registered under the requested name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown spec"
