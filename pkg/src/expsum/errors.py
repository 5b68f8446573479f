"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class ExpsumError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ExpsumError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class OutOfRangeError(DomainError):
    """An integer argument is outside the range covered by a precomputed table."""


class PreconditionError(ExpsumError, ValueError):
    """A documented precondition of a formula does not hold (e.g. m*alpha is an integer)."""


class InvalidConfigError(ExpsumError, ValueError):
    """Inconsistent input data, such as shared primes in a CRT configuration."""


class InvalidModificationError(InvalidConfigError):
    """A modified-character description violates its invariants."""


class ResourceLimitError(ExpsumError):
    """The request exceeds a configured size limit."""


class PhaseTableTooLarge(ResourceLimitError):
    """A rational phase has a denominator too large for a root-of-unity table."""


class NonFiniteTermError(ExpsumError, ArithmeticError):
    """A NaN or infinity reached a compensated sum."""

    def __init__(self, index, value):
        super().__init__(f"non-finite term {value!r} at index {index}")
        self.index = index
        self.value = value
