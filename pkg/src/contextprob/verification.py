"""Randomized self-checks over the angle parametrization.

Each check sweeps a seeded sample of angle pairs (and, where relevant,
settings and marginals) and records the worst residual it saw. The suite is
what the ``verify`` command runs; the ``break_phase_flip`` switch turns the
phase-flip check into its negative control so the failure path of the
reporting machinery can be exercised on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    MINUS,
    PLUS,
    BinaryDistribution,
    incompatibility_coefficient,
    is_double_stochastic,
)
from .eprbohm import (
    DEFAULT_SIGNS,
    AnglePair,
    ConditionalMatrixSet,
    chsh,
    epr_bohm_probabilities,
    matrices_from_angles,
    reconstruct_via_interference,
    setting_correlation,
    verify_phase_opposition,
    verify_selection_phase_flip,
)
from .errors import InvalidCount

# Angles are sampled away from the interval ends so every interference
# denominator stays well above rounding scale and residual bounds are clean.
_ANGLE_MARGIN = 0.05

_TSIRELSON = 2.0 * np.sqrt(2.0)


@dataclass(frozen=True)
class PropertyCheck:
    """Outcome of one randomized check.

    ``worst_residual`` is the largest numeric residual the check measured;
    checks that only classify (pass or fail per sample) report it as a 0/1
    failure indicator instead.
    """

    name: str
    n_samples: int
    worst_residual: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n_samples": self.n_samples,
            "worst_residual": self.worst_residual,
            "passed": self.passed,
        }


def _sample_angles(rng: np.random.Generator) -> AnglePair:
    lo = _ANGLE_MARGIN
    hi = np.pi / 2.0 - _ANGLE_MARGIN
    xi, eta = rng.uniform(lo, hi, size=2)
    return AnglePair(float(xi), float(eta))


def run_property_suite(
    n_samples: int,
    seed: int,
    *,
    break_phase_flip: bool = False,
    tol: float = 1e-12,
) -> list[PropertyCheck]:
    """Run every check on a fresh seeded sample and return their outcomes.

    Parameters
    ----------
    n_samples:
        Angle pairs (and settings) per check; must be positive.
    seed:
        Root seed of the sweep. Equal seeds give equal reports.
    break_phase_flip:
        Run the phase-flip check with the cross-context flip deliberately
        suppressed. The check then fails by design.
    tol:
        Residual bound shared by the exact-identity checks.
    """
    if not isinstance(n_samples, (int, np.integer)) or isinstance(n_samples, bool) or n_samples < 1:
        raise InvalidCount(f"n_samples must be a positive integer, got {n_samples!r}")
    n_samples = int(n_samples)
    rng = np.random.default_rng(seed)
    checks = [
        _check_reconstruction_agreement(rng, n_samples, tol),
        _check_double_stochasticity(rng, n_samples, tol),
        _check_phase_opposition(rng, n_samples, tol),
        _check_selection_phase_flip(rng, n_samples, tol, break_phase_flip),
        _check_coefficient_roundtrip(rng, n_samples, tol),
        _check_correlation_closed_form(rng, n_samples, tol),
        _check_chsh_bound(rng, n_samples, tol),
    ]
    return checks


def _check_reconstruction_agreement(
    rng: np.random.Generator, n_samples: int, tol: float
) -> PropertyCheck:
    # Interference route equals the closed form entrywise.
    worst = 0.0
    for _ in range(n_samples):
        angles = _sample_angles(rng)
        closed = epr_bohm_probabilities(angles)
        recon = reconstruct_via_interference(angles)
        worst = max(worst, float(np.max(np.abs(closed.entries - recon.entries))))
    return PropertyCheck("reconstruction-agreement", n_samples, worst, worst <= tol)


def _check_double_stochasticity(
    rng: np.random.Generator, n_samples: int, tol: float
) -> PropertyCheck:
    # All three conditional matrices, plus the reconstruction, have unit rows.
    worst = 0.0
    passed = True
    for _ in range(n_samples):
        angles = _sample_angles(rng)
        bundle = ConditionalMatrixSet.from_angles(angles)
        recon = reconstruct_via_interference(angles)
        for matrix in (bundle.p_ac, bundle.p_ba, bundle.p_bc, recon):
            worst = max(worst, float(np.max(np.abs(matrix.row_sums() - 1.0))))
            passed = passed and is_double_stochastic(matrix, tol)
        passed = passed and bundle.strictly_positive
    return PropertyCheck("double-stochasticity", n_samples, worst, passed)


def _check_phase_opposition(
    rng: np.random.Generator, n_samples: int, tol: float
) -> PropertyCheck:
    # Opposite maximal phases keep the column normalized; equal ones cannot.
    worst = 0.0
    passed = True
    for _ in range(n_samples):
        angles = _sample_angles(rng)
        for pair in ((-1.0, 1.0), (1.0, -1.0)):
            passed = passed and verify_phase_opposition(angles, *pair, tol=tol)
        for pair in ((1.0, 1.0), (-1.0, -1.0)):
            passed = passed and not verify_phase_opposition(angles, *pair, tol=tol)
    return PropertyCheck("phase-opposition", n_samples, worst, passed)


def _check_selection_phase_flip(
    rng: np.random.Generator, n_samples: int, tol: float, violate: bool
) -> PropertyCheck:
    # Rows of the reconstruction stay normalized exactly because the second
    # selection context negates both phase cosines.
    passed = True
    for _ in range(n_samples):
        angles = _sample_angles(rng)
        passed = passed and verify_selection_phase_flip(
            angles, DEFAULT_SIGNS, violate_flip=violate, tol=tol
        )
    name = "selection-phase-flip (flip suppressed)" if violate else "selection-phase-flip"
    return PropertyCheck(name, n_samples, 0.0 if passed else 1.0, passed)


def _check_coefficient_roundtrip(
    rng: np.random.Generator, n_samples: int, tol: float
) -> PropertyCheck:
    # Feeding the closed-form entries back through the coefficient recovers
    # the maximal phase cosines, flipped in the second selection column.
    worst = 0.0
    for _ in range(n_samples):
        angles = _sample_angles(rng)
        p_ac, p_ba = matrices_from_angles(angles)
        closed = epr_bohm_probabilities(angles)
        for gamma, flip in ((PLUS, 1.0), (MINUS, -1.0)):
            prior = p_ac.column(gamma)
            for beta, cos_theta in (
                (PLUS, DEFAULT_SIGNS.cos_theta_plus),
                (MINUS, DEFAULT_SIGNS.cos_theta_minus),
            ):
                coeff = incompatibility_coefficient(
                    closed.prob(beta, gamma), prior, p_ba, beta
                )
                worst = max(worst, abs(coeff.lam - flip * cos_theta))
    return PropertyCheck("coefficient-roundtrip", n_samples, worst, worst <= tol)


def _check_correlation_closed_form(
    rng: np.random.Generator, n_samples: int, tol: float
) -> PropertyCheck:
    # E(delta) = -cos(2 delta), independent of the selection marginal.
    worst = 0.0
    for _ in range(n_samples):
        delta = float(rng.uniform(-2.0 * np.pi, 2.0 * np.pi))
        marginal = BinaryDistribution.from_p_plus(float(rng.uniform(0.0, 1.0)))
        value = setting_correlation(delta, marginal)
        worst = max(worst, abs(value + np.cos(2.0 * delta)))
    return PropertyCheck("correlation-closed-form", n_samples, worst, worst <= tol)


def _check_chsh_bound(
    rng: np.random.Generator, n_samples: int, tol: float
) -> PropertyCheck:
    # |S| never exceeds 2 sqrt(2) over arbitrary setting quadruples.
    worst = 0.0
    marginal = BinaryDistribution.uniform()
    for _ in range(n_samples):
        a, a_prime, b, b_prime = rng.uniform(0.0, 2.0 * np.pi, size=4)
        s = chsh(float(a), float(a_prime), float(b), float(b_prime), marginal)
        worst = max(worst, max(abs(s) - _TSIRELSON, 0.0))
    return PropertyCheck("chsh-bound", n_samples, worst, worst <= tol)
