"""Exception types shared across the package."""


class WaringmatError(Exception):
    """Base class for all package errors."""


class NotPrime(WaringmatError):
    pass


class DegreeZero(WaringmatError):
    pass


class BudgetExceeded(WaringmatError):
    """An enumeration would exceed the configured census budget."""


class NotInvertible(WaringmatError):
    pass


class NotIrreducible(WaringmatError):
    pass


class NotCyclic(WaringmatError):
    pass


class ScalarInput(WaringmatError):
    pass


class TraceMismatch(WaringmatError):
    pass


class CharDividesK(WaringmatError):
    pass


class DiagonalNotPower(WaringmatError):
    pass


class TwoZeroDiagonal(WaringmatError):
    pass


class OrderNotCoprime(WaringmatError):
    pass


class HypothesisFailed(WaringmatError):
    """A numeric hypothesis of the requested construction does not hold.

    The message names the violated inequality.
    """


class NoPartition(WaringmatError):
    """No partition of n supports a scalar decomposition under the hypotheses."""


class NotDecomposable(WaringmatError):
    """The input is provably outside the requested sumset.

    ``citation`` names the classification rule that excludes it.
    """

    def __init__(self, message, citation=""):
        super().__init__(message)
        self.citation = citation


class Unsupported(WaringmatError):
    """No implemented strategy applies; never returned silently."""


class UnknownTheorem(WaringmatError):
    pass
