"""Exception hierarchy shared by every module."""


class TibellError(Exception):
    """Base class for all library errors."""


class InputError(TibellError, ValueError):
    """Malformed or inconsistent input (dimension mismatch, bad path, ...)."""


class DimensionMismatch(InputError):
    pass


class InvalidPath(InputError):
    pass


class NotBalanced(InputError):
    pass


class PreconditionError(TibellError):
    """A mathematical precondition of an operation does not hold."""


class NotIrreducible(PreconditionError):
    pass


class NegativeCycle(PreconditionError):
    pass


class DegenerateInput(PreconditionError):
    pass


class NotPointed(PreconditionError):
    pass


class Inconsistent(PreconditionError):
    pass


class BudgetExceeded(TibellError):
    """A configured size or time budget was exhausted before completion."""


class CapExceeded(BudgetExceeded):
    pass


class SizeOverflow(BudgetExceeded):
    pass
