"""Exception types shared across the package."""


class PqgaError(Exception):
    """Base class for all errors raised by pqga."""


class DimensionMismatch(PqgaError, ValueError):
    pass


class NotUnitary(PqgaError, ValueError):
    pass


class NotNormalized(PqgaError, ValueError):
    pass


class ProgramTooLong(PqgaError, ValueError):
    pass


class IndexOutOfRange(PqgaError, IndexError):
    pass


class NotBijective(PqgaError, ValueError):
    pass


class ParseError(PqgaError, ValueError):
    pass


class ContractViolation(PqgaError, RuntimeError):
    """The machine left the program register entangled or altered.

    The step operator guarantees product form for basis programs, so this
    is an internal bug, never bad user input.
    """
