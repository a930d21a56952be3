"""Exception hierarchy shared by the whole package.

Every error raised on purpose derives from :class:`ContextualProbabilityError`
so callers can catch one type at an API boundary and map it to a diagnostic.
"""

from __future__ import annotations


class ContextualProbabilityError(ValueError):
    """Base class for all validation and precondition failures."""


class InvalidDistribution(ContextualProbabilityError):
    """A two-outcome distribution is not normalized or has a negative weight."""


class InvalidMatrix(ContextualProbabilityError):
    """A conditional-probability matrix violates shape, range, or column sums."""


class OutOfRangeProbability(ContextualProbabilityError):
    """A scalar that must be a probability lies outside [0, 1]."""


class PreconditionViolation(ContextualProbabilityError):
    """An argument breaks a documented domain restriction (angle range, phase
    sign, seed width, and similar)."""


class InvalidCount(ContextualProbabilityError):
    """A trial or sample count is not a positive integer."""
