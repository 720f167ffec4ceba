"""
Exception hierarchy of selmergen.

Every error raised on purpose by the package derives from
:class:`SelmerGenError`. Control signals that are part of the normal
flow (a missing square root, a singular blend) are returned as values and
are not listed here.
"""

from typing import Any, Optional


class SelmerGenError(Exception):
    """Base class of all selmergen errors."""


class ModulusMismatch(SelmerGenError, ValueError):
    """Field elements of two different prime fields were combined."""


class FieldDivisionByZero(SelmerGenError, ZeroDivisionError):
    """Inversion of the zero element of a prime field."""


class WorkBoundExceeded(SelmerGenError):
    """
    Pollard rho exhausted its iteration budget.

    Attributes
    ----------
    partial : Factorization
        The factorization found so far. ``partial.cofactor_complete`` is
        False and ``partial.remaining`` holds the unfactored composite.
    """

    def __init__(self, partial: Any):
        self.partial = partial
        super().__init__(
            f"factorization work bound exceeded; composite cofactor "
            f"{partial.remaining} left unfactored")


class StageBudgetExceeded(SelmerGenError):
    """A sampling stage rejected every draw of its trial budget."""

    def __init__(self, stage: str, budget: int, rejections: dict[str, int]):
        self.stage = stage
        self.budget = budget
        self.rejections = dict(rejections)
        super().__init__(
            f"{stage} stage rejected {budget} consecutive draws "
            f"({self.rejections})")


class PointSamplingExhausted(SelmerGenError):
    """No abscissa with a square right-hand side was found."""


class CountingUnavailable(SelmerGenError):
    """
    The prime exceeds the built-in counting bound and no counter is set, or
    the external counter failed to run.
    """


class CountingInconsistent(SelmerGenError):
    """
    A point was not annihilated by the computed group order, or the external
    counter printed something that is not an order.
    """


class IncompleteFactorization(SelmerGenError):
    """A validation filter needs a factorization that is not complete."""


class SingularInput(SelmerGenError, ValueError):
    """Externally supplied (c4, c6) describe a singular curve."""


class MaxTrialsExceeded(SelmerGenError):
    """
    The generation loop did not accept a curve within its trial budget.

    Attributes
    ----------
    trials : int
        Number of trials that were run.
    statistics : dict[str, int]
        Rejected trials per cause.
    """

    def __init__(self, trials: int, statistics: dict[str, int]):
        self.trials = trials
        self.statistics = dict(statistics)
        super().__init__(
            f"no curve accepted within {trials} trials ({self.statistics})")


class ParseError(SelmerGenError, ValueError):
    """A transcript or configuration file could not be parsed strictly."""

    def __init__(self, reason: str, offset: Optional[int] = None):
        self.reason = reason
        self.offset = offset
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"{reason}{where}")
