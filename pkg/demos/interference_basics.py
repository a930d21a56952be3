"""Walk through the incompatibility coefficient on small hand-checkable cases.

The classical decomposition of p(b=+) through a two-valued condition can
disagree with a directly observed probability. The coefficient lambda
measures that disagreement in units of twice the geometric mean of the four
path weights, and its magnitude sorts the situation into one of three
regimes.

Run:  python3 demos/interference_basics.py
"""

import math

import numpy as np

from contextprob import (
    PLUS,
    BinaryDistribution,
    TransitionMatrix,
    classical_total_probability,
    incompatibility_coefficient,
    interference_probability,
)


def show(title, coeff):
    theta = "-" if coeff.theta is None else f"{coeff.theta:.6f} rad"
    lam = "-" if coeff.lam is None else f"{coeff.lam:+.6f}"
    print(f"  {title:<46s} lambda {lam:>10s}  regime {coeff.regime.value:<22s} theta {theta}")


def main():
    prior = BinaryDistribution.uniform()
    transition = TransitionMatrix.uniform()
    classical = classical_total_probability(prior, transition, PLUS)
    print(f"uniform prior and transitions: classical two-path value = {classical}")
    print()

    print("sweeping the observed probability against that classical 0.5:")
    for observed in (0.5, 0.75, 1.0, 0.25, 0.0):
        coeff = incompatibility_coefficient(observed, prior, transition, PLUS)
        show(f"observed = {observed:.2f}", coeff)
    print()

    # a skewed prior shrinks the geometric mean, so the same absolute
    # deviation now exceeds what a phase can express
    skewed = BinaryDistribution.from_p_plus(0.99)
    sharp = TransitionMatrix(np.array([[0.99, 0.01], [0.01, 0.99]]))
    print("skewed prior 0.99 with a nearly deterministic transition:")
    show("observed = 0.9", incompatibility_coefficient(0.9, skewed, sharp, PLUS))
    print()

    degenerate = BinaryDistribution.from_p_plus(1.0)
    print("a deterministic prior removes one path entirely:")
    show("observed = 0.5", incompatibility_coefficient(0.5, degenerate, transition, PLUS))
    print()

    print("in the trigonometric regime the coefficient inverts exactly:")
    prior = BinaryDistribution.from_p_plus(0.3)
    transition = TransitionMatrix(np.array([[0.6, 0.4], [0.4, 0.6]]))
    for theta in (0.0, math.pi / 3.0, math.pi / 2.0, 2.5):
        value = interference_probability(prior, transition, PLUS, theta)
        coeff = incompatibility_coefficient(value, prior, transition, PLUS)
        print(
            f"  theta {theta:.4f} -> probability {value:.6f} -> "
            f"recovered cos(theta) {coeff.lam:+.12f} (true {math.cos(theta):+.12f})"
        )


if __name__ == "__main__":
    main()
