"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class DPHelixError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class InvalidInput(DPHelixError):
    pass


class NotInKernel(InvalidInput):
    pass


class NotQPainleve(DPHelixError):
    pass


class NotExceptional(DPHelixError):
    pass


class NotVeryStrong(DPHelixError):
    pass


class NotGood(DPHelixError):
    pass


class SlopeMismatch(DPHelixError):
    pass


class NotOrthogonal(DPHelixError):
    pass


class OracleMismatch(DPHelixError):
    pass


class IncompatibleSurfaces(InvalidInput):
    def __init__(self, invariant: str, left, right):
        super().__init__(f"separating invariant {invariant}: {left} != {right}")
        self.invariant = invariant
        self.left = left
        self.right = right


class ReplayError(DPHelixError):
    def __init__(self, index: int, step, reason: str):
        super().__init__(f"step {index} ({step}) failed: {reason}")
        self.index = index
        self.step = step
        self.reason = reason


class SearchExhausted(DPHelixError):
    """Bounded search found nothing. Not a proof that no answer exists; raise the limits."""

    def __init__(self, stage: str, stats: dict):
        super().__init__(f"search exhausted in stage {stage}: {stats}")
        self.stage = stage
        self.stats = stats
