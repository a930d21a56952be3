"""Compare the -cos(2 delta) correlation family against local models.

The four-setting combination S = E(a,b) - E(a,b') + E(a',b) + E(a',b')
reaches 2 sqrt(2) in magnitude for the closed-form conditionals, while any
strategy that fixes both outputs as local functions of one shared hidden
variable stays inside [-2, 2]. The Monte Carlo here shows both: the
interference-model scan converges to the extreme, the sign-of-cosine local
model pins itself to 2, and independent coin flips sit at 0.

Run:  python3 demos/local_models_and_scans.py
"""

import math

from contextprob import (
    BinaryDistribution,
    LhvStrategy,
    chsh,
    lhv_baseline_chsh,
    setting_correlation,
    simulate_chsh,
)

OPTIMAL = (0.0, math.pi / 4.0, math.pi / 8.0, 3.0 * math.pi / 8.0)


def main():
    uniform = BinaryDistribution.uniform()

    print("single-pair correlation E(delta) = -cos(2 delta):")
    for delta in (0.0, math.pi / 8.0, math.pi / 4.0, math.pi / 2.0):
        print(f"  delta = {delta:.4f}  E = {setting_correlation(delta, uniform):+.6f}")
    print()

    s_exact = chsh(*OPTIMAL, uniform)
    print(f"settings (0, pi/4, pi/8, 3 pi/8): analytic S = {s_exact:+.12f}")
    print(f"  |S| = {abs(s_exact):.12f} = 2 sqrt(2)")
    print()

    print("Monte Carlo scan, one seed, growing sample sizes:")
    for n in (1_000, 10_000, 100_000, 1_000_000):
        s_hat = simulate_chsh(*OPTIMAL, uniform, n, 7)
        print(f"  n = {n:>9d}  S = {s_hat:+.6f}  error {abs(s_hat - s_exact):.6f}")
    print()

    n = 1_000_000
    s_sign = lhv_baseline_chsh(*OPTIMAL, LhvStrategy.DETERMINISTIC_SIGN, n, 7)
    s_coin = lhv_baseline_chsh(*OPTIMAL, LhvStrategy.RANDOM_LOCAL, n, 7)
    s_hat = simulate_chsh(*OPTIMAL, uniform, n, 7)
    print(f"local baselines at n = {n}:")
    print(f"  sign of cosine, shared hidden angle: S = {s_sign:+.6f} (analytic +2)")
    print(f"  independent fair coins:              S = {s_coin:+.6f} (analytic  0)")
    print()
    print(f"separation: |S_interference| - S_sign = {abs(s_hat) - s_sign:.4f}")
    print("the local family is bounded by 2 (estimates wobble around it by")
    print("about 1.5/sqrt(n)); the interference extreme sits at 2.828")


if __name__ == "__main__":
    main()
