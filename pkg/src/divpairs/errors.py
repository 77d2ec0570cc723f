"""Exception hierarchy shared by every module."""


class DivPairsError(Exception):
    """Base class for all errors raised by divpairs."""


class InvalidArgument(DivPairsError, ValueError):
    """An input violates a documented precondition."""


class UnsupportedDelta(InvalidArgument):
    """The residue class of delta has no known construction."""


class NoSolution(DivPairsError):
    """A congruence system is inconsistent.

    ``pair`` holds the two congruences that cannot be satisfied together.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class BudgetExceeded(DivPairsError):
    """A computation would exceed its configured digit or iteration budget."""


class ConstructionFailed(DivPairsError):
    """A construction ran but one of its exact checks did not hold.

    ``result`` carries whatever partial diagnostics were computed.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConsistencyError(DivPairsError):
    """An identity that holds by construction was violated (a bug trap)."""
