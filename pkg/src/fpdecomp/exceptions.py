"""Exception hierarchy shared by every module in the package."""


class FpDecompError(Exception):
    """Base class for all package errors."""


class UnsupportedModulusError(FpDecompError, ValueError):
    """Raised when an operation needs an odd prime but got p = 2 (or a non-prime)."""


class ModulusMismatchError(FpDecompError, ValueError):
    pass


class FieldDivisionError(FpDecompError, ZeroDivisionError):
    pass


class NoSquareRootError(FpDecompError, ValueError):
    pass


class PreconditionError(FpDecompError, ValueError):
    pass


class DimensionError(FpDecompError, ValueError):
    pass


class ParseError(FpDecompError, ValueError):
    """Malformed graph input. ``offset`` is the byte/char position of the fault, if known."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class InfeasibleError(FpDecompError):
    """No multiset of basis blocks matches the requested rank and determinant class."""


class CapExceededError(FpDecompError):
    """An enumeration hit its vertex cap before finding what it was looking for.

    ``partial`` carries whatever was established before the cap was reached.
    """

    def __init__(self, message: str, cap: int, partial: dict | None = None):
        super().__init__(message)
        self.cap = cap
        self.partial = partial or {}


class VerificationError(FpDecompError, AssertionError):
    """A constructed congruence failed its own post-check. Indicates a bug."""
