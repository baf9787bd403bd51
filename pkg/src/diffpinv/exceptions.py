"""Exception hierarchy for the difference-matrix toolkit."""


class DiffPinvError(Exception):
    """Base class for every error raised by this package."""


class SizeTooSmall(DiffPinvError, ValueError):
    pass


class DimensionMismatch(DiffPinvError, ValueError):
    pass


class SingularSystem(DiffPinvError, ArithmeticError):
    pass


class EigensolverFailure(DiffPinvError, ArithmeticError):
    pass


class RankAssumptionViolated(DiffPinvError, ArithmeticError):
    """More (or fewer) than one eigenvalue fell below the truncation threshold."""


class Unsupported(DiffPinvError, NotImplementedError):
    pass


class ZeroColumn(DiffPinvError, ValueError):
    pass


class NotMeanZero(DiffPinvError, ValueError):
    pass


class BudgetTooLarge(DiffPinvError, ValueError):
    pass


class IndexOutOfRange(DiffPinvError, IndexError):
    pass


class EmptyMask(DiffPinvError, ValueError):
    pass


class RankDeficientSelection(DiffPinvError, ArithmeticError):
    """Selected atoms became numerically dependent.

    The trace collected up to the failing iteration is kept on ``trace``.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
