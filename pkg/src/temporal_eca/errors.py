"""Exception types raised by the library.

Every error subclasses :class:`DomainError` so the CLI can map them onto
exit code 1 in one place.
"""


class DomainError(ValueError):
    """Base class for all domain-level failures."""


class InvalidWord(DomainError):
    """A temporal word has a bad character or is shorter than 3 symbols."""


class IllFormed(DomainError):
    """A temporal word whose precedence relation is cyclic."""


class DimensionMismatch(DomainError):
    """Operands live on tori of different sizes."""


class NonBijectiveGenerator(DomainError):
    """A group generator is not a permutation."""


class DegreeTooLarge(DomainError):
    """The permutation degree exceeds the configured cap."""


class BadParams(DomainError):
    """Invalid parameters for a builtin function or construction."""


class NotRepresentable(DomainError):
    """The target function cannot be produced by any rule sequence."""


class LimitsExceeded(DomainError):
    """A search ran out of its depth or frontier budget."""
