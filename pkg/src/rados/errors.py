"""Exception types shared across the package."""


class RadoError(Exception):
    """Base class for errors raised by this package."""


class DatasetError(RadoError, ValueError):
    """Malformed or unusable input data."""


class ZeroColumnError(RadoError, ValueError):
    """A feature column is identically zero, so its normalized edge is undefined."""


class WeakLearnerError(RadoError, ValueError):
    """The weak feature oracle has no feasible feature to return."""


class NumericError(RadoError, ArithmeticError):
    """A computation would overflow or is otherwise numerically meaningless."""


class UnderdeterminedError(RadoError, ValueError):
    """The edge-recovery system has no unique solution."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class DrawBudgetExceeded(RadoError, RuntimeError):
    """Rejection sampling used up its draw budget before collecting enough rados."""

    def __init__(self, message, accepted=0, draws=0):
        super().__init__(message)
        self.accepted = accepted
        self.draws = draws
