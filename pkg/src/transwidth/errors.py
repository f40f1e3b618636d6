"""Exception types raised across the package."""


class TransWidthError(Exception):
    """Base class for all package errors."""


class DimError(TransWidthError, ValueError):
    pass


class DomainError(TransWidthError, ValueError):
    pass


class NonIsometry(TransWidthError, ValueError):
    pass


class OrbitOverflow(TransWidthError, RuntimeError):
    pass


class UnsupportedVirtual(TransWidthError, TypeError):
    pass


class WrongKind(TransWidthError, TypeError):
    pass


class NonOrthogonalSubspaces(TransWidthError, ValueError):
    pass


class NonOrthogonalBlocks(TransWidthError, ValueError):
    pass


class DegenerateWitness(TransWidthError, ValueError):
    pass


class NotASystem(TransWidthError, ValueError):
    """Raised when a block decomposition is not a system of imprimitivity.

    ``generator`` and ``block`` identify the offending pair when known.
    """

    def __init__(self, message, generator=None, block=None):
        super().__init__(message)
        self.generator = generator
        self.block = block
