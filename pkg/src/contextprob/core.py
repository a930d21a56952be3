"""Total-probability bookkeeping for dichotomous observables.

The objects here describe one two-outcome observable conditioned on another:
a prior over the conditioning outcomes, a column-stochastic 2x2 matrix of
transition probabilities, and the additive correction that appears when an
observed probability disagrees with the classical two-path decomposition.
The correction is summarized by a dimensionless coefficient; its magnitude
decides whether the disagreement can be written as ``2 cos(theta)`` times the
geometric mean of the four path weights.

Outcomes are encoded as the integers ``+1`` and ``-1`` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    InvalidDistribution,
    InvalidMatrix,
    OutOfRangeProbability,
    PreconditionViolation,
)

PLUS = 1
MINUS = -1

# Construction-time normalization tolerance. Definitional, not configurable:
# inputs further off than this are data errors, not rounding.
NORMALIZATION_TOL = 1e-12

# Default slack for the doubly-stochastic predicate. Estimated matrices carry
# sampling noise, so this one is a keyword argument.
DOUBLE_STOCHASTIC_TOL = 1e-9

# interference_probability snaps results within this distance back onto the
# [0, 1] boundary. A consistent (prior, transitions, theta) triple can only
# leave the interval through last-bit rounding; genuine inconsistencies
# overshoot by far more and still raise.
BOUNDARY_GUARD = 1e-12


def _outcome_index(outcome: int) -> int:
    # +1 -> row/column 0, -1 -> row/column 1
    if outcome == PLUS:
        return 0
    if outcome == MINUS:
        return 1
    raise PreconditionViolation(f"outcome must be +1 or -1, got {outcome!r}")


@dataclass(frozen=True)
class BinaryDistribution:
    """Probability weights of a single dichotomous observable.

    The two weights must be nonnegative and sum to 1 within
    ``NORMALIZATION_TOL``.
    """

    p_plus: float
    p_minus: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_plus", float(self.p_plus))
        object.__setattr__(self, "p_minus", float(self.p_minus))
        if not (math.isfinite(self.p_plus) and math.isfinite(self.p_minus)):
            raise InvalidDistribution("weights must be finite")
        if self.p_plus < 0.0 or self.p_minus < 0.0:
            raise InvalidDistribution(
                f"weights must be nonnegative, got ({self.p_plus}, {self.p_minus})"
            )
        total = self.p_plus + self.p_minus
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidDistribution(
                f"normalization violated: weights sum to {total!r}, expected 1"
            )

    @classmethod
    def uniform(cls) -> "BinaryDistribution":
        return cls(0.5, 0.5)

    @classmethod
    def from_p_plus(cls, p_plus: float) -> "BinaryDistribution":
        """Build from the + weight alone; the - weight is its complement."""
        p_plus = float(p_plus)
        if not 0.0 <= p_plus <= 1.0:
            raise InvalidDistribution(f"p_plus must lie in [0, 1], got {p_plus}")
        return cls(p_plus, 1.0 - p_plus)

    def prob(self, outcome: int) -> float:
        return (self.p_plus, self.p_minus)[_outcome_index(outcome)]

    def to_dict(self) -> dict:
        return {"p_plus": self.p_plus, "p_minus": self.p_minus}

    @classmethod
    def from_dict(cls, data: dict) -> "BinaryDistribution":
        return cls(data["p_plus"], data["p_minus"])


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Column-stochastic 2x2 matrix of conditional probabilities.

    ``entries[i][j]`` is the probability of result ``beta`` given condition
    ``alpha``, with ``+1`` mapped to index 0 and ``-1`` to index 1. Rows index
    the result, columns the condition, so each column sums to 1 within
    ``NORMALIZATION_TOL``. Rows need not: row sums equal 1 only for the
    doubly-stochastic subclass tested by :func:`is_double_stochastic`.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=float, copy=True)
        if arr.shape != (2, 2):
            raise InvalidMatrix(f"expected a 2x2 matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidMatrix("entries must be finite")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise InvalidMatrix("entries must lie in [0, 1]")
        col_sums = arr.sum(axis=0)
        if np.any(np.abs(col_sums - 1.0) > NORMALIZATION_TOL):
            raise InvalidMatrix(
                f"column stochasticity violated: column sums are {col_sums.tolist()!r}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    @classmethod
    def uniform(cls) -> "TransitionMatrix":
        return cls(np.full((2, 2), 0.5))

    def prob(self, result: int, condition: int) -> float:
        return float(self.entries[_outcome_index(result), _outcome_index(condition)])

    def column(self, condition: int) -> BinaryDistribution:
        """The result distribution for one fixed condition."""
        j = _outcome_index(condition)
        return BinaryDistribution(float(self.entries[0, j]), float(self.entries[1, j]))

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def to_dict(self) -> dict:
        return {"entries": self.entries.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "TransitionMatrix":
        return cls(np.array(data["entries"], dtype=float))


class Regime(Enum):
    """Classification of the incompatibility coefficient by magnitude."""

    TRIGONOMETRIC = "trigonometric"
    HYPERBOLIC = "hyperbolic"
    DEGENERATE_DENOMINATOR = "degenerate-denominator"


@dataclass(frozen=True)
class InterferenceCoefficient:
    """Result of :func:`incompatibility_coefficient`.

    ``lam`` is the coefficient itself (None when the normalizing denominator
    vanishes), ``theta`` its arccosine in [0, pi] (present only in the
    trigonometric regime).
    """

    lam: float | None
    regime: Regime
    theta: float | None

    def __post_init__(self) -> None:
        if self.regime is Regime.DEGENERATE_DENOMINATOR:
            if self.lam is not None or self.theta is not None:
                raise PreconditionViolation(
                    "degenerate coefficient carries neither lambda nor theta"
                )
        elif self.regime is Regime.TRIGONOMETRIC:
            if self.lam is None or self.theta is None:
                raise PreconditionViolation(
                    "trigonometric coefficient requires lambda and theta"
                )
        else:
            if self.lam is None or self.theta is not None:
                raise PreconditionViolation(
                    "hyperbolic coefficient requires lambda and no theta"
                )

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "regime": self.regime.value,
            "theta": self.theta,
        }


def _four_factors(
    prior: BinaryDistribution, transition: TransitionMatrix, beta: int
) -> tuple[float, float, float, float]:
    # The four path weights whose product normalizes the interference term.
    return (
        prior.p_plus,
        transition.prob(beta, PLUS),
        prior.p_minus,
        transition.prob(beta, MINUS),
    )


def classical_total_probability(
    prior: BinaryDistribution, transition: TransitionMatrix, beta: int
) -> float:
    """Two-path decomposition of the probability of result ``beta``.

    Parameters
    ----------
    prior:
        Distribution of the conditioning observable.
    transition:
        Conditional probabilities of the result given each condition.
    beta:
        Result outcome, ``+1`` or ``-1``.

    Returns
    -------
    float
        ``prior(+) * transition(beta | +) + prior(-) * transition(beta | -)``.
    """
    return prior.p_plus * transition.prob(beta, PLUS) + prior.p_minus * transition.prob(
        beta, MINUS
    )


def incompatibility_coefficient(
    observed: float,
    prior: BinaryDistribution,
    transition: TransitionMatrix,
    beta: int,
) -> InterferenceCoefficient:
    """Coefficient of statistical incompatibility of an observed probability.

    Measures how far ``observed`` sits from the classical two-path value, in
    units of twice the geometric mean of the four path weights:

    ``lambda = (observed - classical) / (2 * sqrt(p(+) p(beta|+) p(-) p(beta|-)))``

    Parameters
    ----------
    observed:
        Directly measured probability of result ``beta``; must lie in [0, 1].
    prior, transition, beta:
        As in :func:`classical_total_probability`.

    Returns
    -------
    InterferenceCoefficient
        Trigonometric regime with ``theta = arccos(lambda)`` when
        ``|lambda| <= 1``, hyperbolic when ``|lambda| > 1``, and the
        degenerate regime (no coefficient at all) when any of the four path
        weights is exactly zero.

    Raises
    ------
    OutOfRangeProbability
        If ``observed`` is outside [0, 1].
    """
    observed = float(observed)
    if not 0.0 <= observed <= 1.0:
        raise OutOfRangeProbability(
            f"observed probability must lie in [0, 1], got {observed}"
        )
    factors = _four_factors(prior, transition, beta)
    if any(f == 0.0 for f in factors):
        return InterferenceCoefficient(None, Regime.DEGENERATE_DENOMINATOR, None)
    classical = classical_total_probability(prior, transition, beta)
    lam = (observed - classical) / (2.0 * math.sqrt(math.prod(factors)))
    if abs(lam) <= 1.0:
        return InterferenceCoefficient(lam, Regime.TRIGONOMETRIC, math.acos(lam))
    return InterferenceCoefficient(lam, Regime.HYPERBOLIC, None)


def interference_probability(
    prior: BinaryDistribution,
    transition: TransitionMatrix,
    beta: int,
    theta: float,
) -> float:
    """Classical two-path probability plus a phase-controlled correction.

    Evaluates

    ``classical + 2 cos(theta) * sqrt(p(+) p(beta|+) p(-) p(beta|-))``

    which inverts :func:`incompatibility_coefficient` in the trigonometric
    regime: feeding the result back in recovers ``lambda = cos(theta)``.

    Parameters
    ----------
    theta:
        Phase in [0, pi].

    Raises
    ------
    PreconditionViolation
        If ``theta`` is outside [0, pi].
    OutOfRangeProbability
        If the evaluated expression leaves [0, 1] by more than
        ``BOUNDARY_GUARD``, meaning no probability model is consistent with
        the given triple. Results inside the guard band are snapped onto the
        boundary, which absorbs last-bit rounding of legitimately extremal
        configurations.
    """
    theta = float(theta)
    if not 0.0 <= theta <= math.pi:
        raise PreconditionViolation(f"theta must lie in [0, pi], got {theta}")
    classical = classical_total_probability(prior, transition, beta)
    term = 2.0 * math.cos(theta) * math.sqrt(math.prod(_four_factors(prior, transition, beta)))
    value = classical + term
    if value < 0.0:
        if value >= -BOUNDARY_GUARD:
            return 0.0
        raise OutOfRangeProbability(
            f"interference value {value!r} falls below 0; "
            "the prior, transition, and phase are mutually inconsistent"
        )
    if value > 1.0:
        if value <= 1.0 + BOUNDARY_GUARD:
            return 1.0
        raise OutOfRangeProbability(
            f"interference value {value!r} exceeds 1; "
            "the prior, transition, and phase are mutually inconsistent"
        )
    return value


def is_double_stochastic(
    transition: TransitionMatrix, tol: float = DOUBLE_STOCHASTIC_TOL
) -> bool:
    """True when every row of ``transition`` also sums to 1 within ``tol``.

    Columns already sum to 1 by construction, so this is the extra symmetry
    that makes the matrix doubly stochastic.
    """
    return bool(np.all(np.abs(transition.row_sums() - 1.0) <= float(tol)))
