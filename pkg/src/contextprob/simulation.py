"""Seeded Monte Carlo of the time-ordered selection/measurement protocol.

Each trial draws a selection time and a measurement time, orders them, picks
the selection outcome ``gamma`` from the configured marginal, then picks the
measurement outcome ``beta`` from the closed-form conditionals at the
configured angle difference. Counts, per-cell estimates with binomial standard
errors, and the sign-product correlation come out in a report object.

Determinism contract
--------------------
All randomness flows through a counter-based Philox stream keyed by the seed.
Trial ``i`` owns the four 64-bit words at counter ``i`` (one Philox block):

    word 0: first time candidate
    word 1: second time candidate
    word 2: uniform deciding gamma
    word 3: uniform deciding beta

Because block ``i`` is addressable directly, the trial range can be cut into
any number of contiguous chunks and processed in any grouping without changing
a single outcome; ``n_chunks`` only controls batch size. The fixed-order time
mode skips words 0 and 1 but never re-purposes them, so switching time modes
leaves the (gamma, beta) stream untouched. The rare trial whose two time words
compare equal as floats is re-drawn from a reserved counter range far above
the trial range (offset ``2**64``), again addressed by trial index.

Four-setting scans derive one child seed per setting pair from the root seed,
so the pairs are independent but the whole scan replays from a single integer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import IO

import numpy as np

from .core import BinaryDistribution
from .eprbohm import AnglePair, conditional_probabilities
from .errors import InvalidCount, PreconditionViolation

_REDRAW_COUNTER_BASE = 1 << 64
_SEED_LIMIT = 1 << 64


class TimeDistribution(Enum):
    """How the two per-trial event times are produced."""

    UNIFORM_SQUARE = "uniform-square"  # (t1, t2) uniform on the unit square, ordered
    FIXED_ORDER = "fixed-order"  # selection at 0, measurement at 1


class LhvStrategy(Enum):
    """Local hidden-variable baselines for the four-setting scan."""

    DETERMINISTIC_SIGN = "deterministic-sign"
    RANDOM_LOCAL = "random-local"


def _require_count(n: int, name: str) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise InvalidCount(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def _require_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
        raise PreconditionViolation(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < _SEED_LIMIT:
        raise PreconditionViolation(f"seed must satisfy 0 <= seed < 2**64, got {seed}")
    return int(seed)


@dataclass(frozen=True)
class SimConfig:
    """Immutable description of one simulation run."""

    angles: AnglePair
    marginal_c: BinaryDistribution
    n_pairs: int
    seed: int
    time_distribution: TimeDistribution = TimeDistribution.UNIFORM_SQUARE

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_pairs", _require_count(self.n_pairs, "n_pairs"))
        object.__setattr__(self, "seed", _require_seed(self.seed))
        if not isinstance(self.time_distribution, TimeDistribution):
            raise PreconditionViolation(
                f"time_distribution must be a TimeDistribution, got {self.time_distribution!r}"
            )

    def to_dict(self) -> dict:
        return {
            "angles": self.angles.to_dict(),
            "marginal_c": self.marginal_c.to_dict(),
            "n_pairs": self.n_pairs,
            "seed": self.seed,
            "time_distribution": self.time_distribution.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        return cls(
            angles=AnglePair(**data["angles"]),
            marginal_c=BinaryDistribution.from_dict(data["marginal_c"]),
            n_pairs=data["n_pairs"],
            seed=data["seed"],
            time_distribution=TimeDistribution(data["time_distribution"]),
        )


@dataclass(frozen=True)
class TrialRecord:
    """One logged trial. Selection strictly precedes measurement."""

    t_selection: float
    t_measurement: float
    gamma: int
    beta: int

    def __post_init__(self) -> None:
        if not self.t_selection < self.t_measurement:
            raise PreconditionViolation(
                "t_selection must be strictly less than t_measurement, "
                f"got {self.t_selection!r} >= {self.t_measurement!r}"
            )
        for name, value in (("gamma", self.gamma), ("beta", self.beta)):
            if value not in (1, -1):
                raise PreconditionViolation(f"{name} must be +1 or -1, got {value!r}")

    def to_dict(self) -> dict:
        return {
            "t_selection": self.t_selection,
            "t_measurement": self.t_measurement,
            "gamma": self.gamma,
            "beta": self.beta,
        }


@dataclass(frozen=True, eq=False)
class SimReport:
    """Counts and estimates of one run, plus the configuration that made it.

    ``counts[i, j]`` holds the number of trials with result ``beta`` indexed
    by ``i`` and selection ``gamma`` indexed by ``j`` (+1 first, -1 second).
    ``estimated_conditionals`` divides each column by its total; the second
    row is stored as one minus the first so populated columns sum to 1.0
    exactly in floating point. A selection outcome that never occurred leaves
    its column as NaN, which is why this field is a plain array rather than a
    validated transition matrix. ``std_errors`` carries the per-cell binomial
    standard error ``sqrt(p (1 - p) / n_col)``, NaN on empty columns.
    """

    counts: np.ndarray
    estimated_conditionals: np.ndarray
    estimated_correlation: float
    std_errors: np.ndarray
    n_redraws: int
    wall_config: SimConfig

    def __post_init__(self) -> None:
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        est = np.array(self.estimated_conditionals, dtype=float, copy=True)
        se = np.array(self.std_errors, dtype=float, copy=True)
        for name, arr in (("counts", counts), ("estimated_conditionals", est), ("std_errors", se)):
            if arr.shape != (2, 2):
                raise PreconditionViolation(f"{name} must be 2x2, got shape {arr.shape}")
        if np.any(counts < 0) or counts.sum() != self.wall_config.n_pairs:
            raise PreconditionViolation("counts must be nonnegative and sum to n_pairs")
        for arr in (counts, est, se):
            arr.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "estimated_conditionals", est)
        object.__setattr__(self, "std_errors", se)
        object.__setattr__(self, "estimated_correlation", float(self.estimated_correlation))
        object.__setattr__(self, "n_redraws", int(self.n_redraws))

    def to_dict(self) -> dict:
        def cells(arr: np.ndarray) -> list:
            return [[_nan_to_none(v) for v in row] for row in arr.tolist()]

        return {
            "counts": self.counts.tolist(),
            "estimated_conditionals": cells(self.estimated_conditionals),
            "estimated_correlation": self.estimated_correlation,
            "std_errors": cells(self.std_errors),
            "n_redraws": self.n_redraws,
            "wall_config": self.wall_config.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimReport":
        def arr(rows: list) -> np.ndarray:
            return np.array(
                [[math.nan if v is None else v for v in row] for row in rows], dtype=float
            )

        return cls(
            counts=np.array(data["counts"], dtype=np.int64),
            estimated_conditionals=arr(data["estimated_conditionals"]),
            estimated_correlation=data["estimated_correlation"],
            std_errors=arr(data["std_errors"]),
            n_redraws=data["n_redraws"],
            wall_config=SimConfig.from_dict(data["wall_config"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@dataclass(frozen=True)
class TimeOrderStats:
    """Summary of the ordered time pairs of one configuration."""

    n_pairs: int
    n_redraws: int
    redraw_fraction: float
    mean_gap: float
    std_gap: float
    min_gap: float
    max_gap: float

    def to_dict(self) -> dict:
        return {
            "n_pairs": self.n_pairs,
            "n_redraws": self.n_redraws,
            "redraw_fraction": self.redraw_fraction,
            "mean_gap": self.mean_gap,
            "std_gap": self.std_gap,
            "min_gap": self.min_gap,
            "max_gap": self.max_gap,
        }


def _nan_to_none(value: float) -> float | None:
    return None if isinstance(value, float) and math.isnan(value) else value


def _philox_key(seed: int) -> np.ndarray:
    return np.random.SeedSequence(seed).generate_state(2, np.uint64)


def _child_seed(seed: int, branch: int, index: int) -> int:
    # One child integer per (branch, index), derived so different branches of
    # the same root seed never share a stream.
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(branch, index))
    return int(ss.generate_state(1, np.uint64)[0])


def _chunk_bounds(n: int, n_chunks: int) -> list[tuple[int, int]]:
    n_chunks = max(1, min(int(n_chunks), n))
    edges = [i * n // n_chunks for i in range(n_chunks + 1)]
    return [(edges[i], edges[i + 1]) for i in range(n_chunks) if edges[i + 1] > edges[i]]


def _trial_words(key: np.ndarray, lo: int, hi: int) -> np.ndarray:
    # Philox counter k maps to words [4k, 4k+4); Generator.random consumes one
    # word per double, so row i of the reshape is exactly trial lo+i.
    gen = np.random.Generator(np.random.Philox(key=key, counter=lo))
    return gen.random(4 * (hi - lo)).reshape(hi - lo, 4)


def _resolve_equal_times(key: np.ndarray, trial_index: int) -> tuple[float, float, int]:
    # Redraw stream for one trial, disjoint by construction from every trial
    # block (trial counters are below 2**64).
    gen = np.random.Generator(
        np.random.Philox(key=key, counter=_REDRAW_COUNTER_BASE + trial_index)
    )
    redraws = 1  # the equality that brought us here
    while True:
        t1, t2 = gen.random(2)
        if t1 != t2:
            return float(t1), float(t2), redraws
        redraws += 1


def _ordered_times(
    key: np.ndarray,
    lo: int,
    words: np.ndarray,
    time_distribution: TimeDistribution,
) -> tuple[np.ndarray, np.ndarray, int]:
    m = words.shape[0]
    if time_distribution is TimeDistribution.FIXED_ORDER:
        return np.zeros(m), np.ones(m), 0
    t1 = words[:, 0].copy()
    t2 = words[:, 1].copy()
    n_redraws = 0
    for idx in np.flatnonzero(t1 == t2):
        a, b, redraws = _resolve_equal_times(key, lo + int(idx))
        t1[idx], t2[idx] = a, b
        n_redraws += redraws
    return np.minimum(t1, t2), np.maximum(t1, t2), n_redraws


def _outcome_signs(
    words: np.ndarray, cond: np.ndarray, q_plus: float
) -> tuple[np.ndarray, np.ndarray]:
    gamma = np.where(words[:, 2] < q_plus, 1, -1)
    p_plus_given = np.where(gamma == 1, cond[0, 0], cond[0, 1])
    beta = np.where(words[:, 3] < p_plus_given, 1, -1)
    return gamma, beta


def _accumulate_counts(counts: np.ndarray, gamma: np.ndarray, beta: np.ndarray) -> None:
    for i, b in enumerate((1, -1)):
        for j, g in enumerate((1, -1)):
            counts[i, j] += int(np.count_nonzero((beta == b) & (gamma == g)))


def _write_trial_lines(
    stream: IO[str],
    t_sel: np.ndarray,
    t_meas: np.ndarray,
    gamma: np.ndarray,
    beta: np.ndarray,
) -> None:
    for k in range(len(gamma)):
        record = TrialRecord(
            t_selection=float(t_sel[k]),
            t_measurement=float(t_meas[k]),
            gamma=int(gamma[k]),
            beta=int(beta[k]),
        )
        stream.write(json.dumps(record.to_dict()) + "\n")


def _simulate_counts(
    cond: np.ndarray,
    q_plus: float,
    n: int,
    key: np.ndarray,
    n_chunks: int,
    time_distribution: TimeDistribution,
    trial_log: IO[str] | None = None,
) -> tuple[np.ndarray, int]:
    counts = np.zeros((2, 2), dtype=np.int64)
    n_redraws = 0
    for lo, hi in _chunk_bounds(n, n_chunks):
        words = _trial_words(key, lo, hi)
        gamma, beta = _outcome_signs(words, cond, q_plus)
        _accumulate_counts(counts, gamma, beta)
        if trial_log is not None or time_distribution is TimeDistribution.UNIFORM_SQUARE:
            t_sel, t_meas, redraws = _ordered_times(key, lo, words, time_distribution)
            n_redraws += redraws
            if trial_log is not None:
                _write_trial_lines(trial_log, t_sel, t_meas, gamma, beta)
    return counts, n_redraws


def run_simulation(
    config: SimConfig, *, n_chunks: int = 1, trial_log: IO[str] | None = None
) -> SimReport:
    """Run one seeded ensemble and summarize it.

    Parameters
    ----------
    config:
        Angles, selection marginal, trial count, seed, and time mode.
    n_chunks:
        Number of contiguous batches to process the trial range in. Any value
        yields bit-identical results; larger values bound peak memory for
        large ``n_pairs``.
    trial_log:
        Optional text stream receiving one JSON object per trial
        (``t_selection``, ``t_measurement``, ``gamma``, ``beta``), in trial
        order.

    Returns
    -------
    SimReport
    """
    key = _philox_key(config.seed)
    cond = conditional_probabilities(config.angles.delta)
    counts, n_redraws = _simulate_counts(
        cond,
        config.marginal_c.p_plus,
        config.n_pairs,
        key,
        n_chunks,
        config.time_distribution,
        trial_log,
    )

    est = np.full((2, 2), math.nan)
    se = np.full((2, 2), math.nan)
    col_totals = counts.sum(axis=0)
    for j in range(2):
        n_col = int(col_totals[j])
        if n_col == 0:
            continue
        p = counts[0, j] / n_col
        est[0, j] = p
        est[1, j] = 1.0 - p  # complement, so the column sums to 1.0 exactly
        s = math.sqrt(p * (1.0 - p) / n_col)
        se[0, j] = s
        se[1, j] = s
    corr = (
        int(counts[0, 0]) - int(counts[1, 0]) - int(counts[0, 1]) + int(counts[1, 1])
    ) / config.n_pairs
    return SimReport(
        counts=counts,
        estimated_conditionals=est,
        estimated_correlation=corr,
        std_errors=se,
        n_redraws=n_redraws,
        wall_config=config,
    )


def time_order_statistics(config: SimConfig, *, n_chunks: int = 1) -> TimeOrderStats:
    """Gap statistics of the ordered time pairs, without touching outcomes.

    Replays exactly the time words of :func:`run_simulation` for ``config``
    (same seed, same redraw resolution) and accumulates the measurement minus
    selection gaps. In the fixed-order mode every gap is 1 and there are no
    redraws. In the uniform-square mode the gap is the absolute difference of
    two independent uniforms, with mean 1/3 and variance 1/18.

    The individual gaps, the extremes, and the redraw count are independent
    of ``n_chunks``; the accumulated mean and standard deviation are one-pass
    reductions, so their last bits can move with the batch width.
    """
    key = _philox_key(config.seed)
    n = config.n_pairs
    n_redraws = 0
    total = 0.0
    total_sq = 0.0
    gap_min = math.inf
    gap_max = -math.inf
    for lo, hi in _chunk_bounds(n, n_chunks):
        words = _trial_words(key, lo, hi)
        t_sel, t_meas, redraws = _ordered_times(key, lo, words, config.time_distribution)
        n_redraws += redraws
        gaps = t_meas - t_sel
        total += float(gaps.sum())
        total_sq += float((gaps * gaps).sum())
        gap_min = min(gap_min, float(gaps.min()))
        gap_max = max(gap_max, float(gaps.max()))
    mean = total / n
    variance = max(total_sq / n - mean * mean, 0.0)
    return TimeOrderStats(
        n_pairs=n,
        n_redraws=n_redraws,
        redraw_fraction=n_redraws / n,
        mean_gap=mean,
        std_gap=math.sqrt(variance),
        min_gap=gap_min,
        max_gap=gap_max,
    )


_CHSH_PAIR_ORDER = ((0, 2), (0, 3), (1, 2), (1, 3))  # (a,b), (a,b'), (a',b), (a',b')
_CHSH_SIGNS = (1.0, -1.0, 1.0, 1.0)


def simulate_chsh(
    a: float,
    a_prime: float,
    b: float,
    b_prime: float,
    marginal_c: BinaryDistribution,
    n_per_setting: int,
    seed: int,
    *,
    n_chunks: int = 1,
) -> float:
    """Monte Carlo estimate of the four-setting correlation combination.

    Runs one independent ensemble of ``n_per_setting`` trials per setting
    pair, each from a child seed of ``seed``, estimates the sign-product
    correlation from the counts, and combines them as
    ``E(a,b) - E(a,b') + E(a',b) + E(a',b')``.
    """
    n_per_setting = _require_count(n_per_setting, "n_per_setting")
    seed = _require_seed(seed)
    settings = (a, a_prime, b, b_prime)
    value = 0.0
    for k, (i, j) in enumerate(_CHSH_PAIR_ORDER):
        key = _philox_key(_child_seed(seed, 0, k))
        cond = conditional_probabilities(float(settings[i]) - float(settings[j]))
        counts, _ = _simulate_counts(
            cond,
            marginal_c.p_plus,
            n_per_setting,
            key,
            n_chunks,
            TimeDistribution.FIXED_ORDER,
        )
        estimate = (
            int(counts[0, 0]) - int(counts[1, 0]) - int(counts[0, 1]) + int(counts[1, 1])
        ) / n_per_setting
        value += _CHSH_SIGNS[k] * estimate
    return value


def lhv_baseline_chsh(
    a: float,
    a_prime: float,
    b: float,
    b_prime: float,
    strategy: LhvStrategy,
    n_per_setting: int,
    seed: int,
) -> float:
    """Same four-setting combination under a local hidden-variable model.

    ``DETERMINISTIC_SIGN`` draws a shared hidden angle uniformly on
    [0, 2 pi) per trial and makes each side output the sign of the cosine of
    its setting minus that angle; the single-pair correlation then depends
    only on the effective setting separation and the combination cannot leave
    [-2, 2]. ``RANDOM_LOCAL`` replaces both outputs by independent fair
    signs, so every correlation estimates 0. Child seeds per setting pair are
    drawn from a branch disjoint from :func:`simulate_chsh`.
    """
    if not isinstance(strategy, LhvStrategy):
        raise PreconditionViolation(f"strategy must be an LhvStrategy, got {strategy!r}")
    n_per_setting = _require_count(n_per_setting, "n_per_setting")
    seed = _require_seed(seed)
    settings = (a, a_prime, b, b_prime)
    value = 0.0
    for k, (i, j) in enumerate(_CHSH_PAIR_ORDER):
        gen = np.random.Generator(np.random.Philox(key=_philox_key(_child_seed(seed, 1, k))))
        x, y = float(settings[i]), float(settings[j])
        if strategy is LhvStrategy.DETERMINISTIC_SIGN:
            hidden = gen.random(n_per_setting) * (2.0 * math.pi)
            side_a = np.where(np.cos(x - hidden) >= 0.0, 1, -1)
            side_b = np.where(np.cos(y - hidden) >= 0.0, 1, -1)
        else:
            side_a = np.where(gen.random(n_per_setting) < 0.5, 1, -1)
            side_b = np.where(gen.random(n_per_setting) < 0.5, 1, -1)
        value += _CHSH_SIGNS[k] * float(np.mean(side_a * side_b))
    return value
