import io
import json
import math

import numpy as np
import pytest

from contextprob import (
    AnglePair,
    BinaryDistribution,
    InvalidCount,
    LhvStrategy,
    PreconditionViolation,
    SimConfig,
    SimReport,
    TimeDistribution,
    TrialRecord,
    lhv_baseline_chsh,
    run_simulation,
    setting_correlation,
    simulate_chsh,
    time_order_statistics,
)

OPTIMAL = (0.0, math.pi / 4.0, math.pi / 8.0, 3.0 * math.pi / 8.0)


def config(n=10_000, seed=42, xi=math.pi / 3.0, eta=math.pi / 6.0, q=0.5, mode=None):
    return SimConfig(
        angles=AnglePair(xi, eta),
        marginal_c=BinaryDistribution.from_p_plus(q),
        n_pairs=n,
        seed=seed,
        time_distribution=mode or TimeDistribution.UNIFORM_SQUARE,
    )


def lhv_sign_correlation(delta):
    # shared hidden angle uniform on the circle, both sides output the sign
    # of the cosine: agreement probability is linear in the folded separation
    d = abs(delta) % (2.0 * math.pi)
    d = min(d, 2.0 * math.pi - d)
    return 1.0 - 2.0 * d / math.pi


class TestSimConfig:
    def test_rejects_zero_trials(self):
        with pytest.raises(InvalidCount):
            config(n=0)

    def test_rejects_negative_trials(self):
        with pytest.raises(InvalidCount):
            config(n=-5)

    def test_rejects_seed_outside_64_bits(self):
        with pytest.raises(PreconditionViolation):
            config(seed=1 << 64)
        with pytest.raises(PreconditionViolation):
            config(seed=-1)

    def test_dict_round_trip(self):
        cfg = config(n=77, seed=123, mode=TimeDistribution.FIXED_ORDER)
        assert SimConfig.from_dict(cfg.to_dict()) == cfg


class TestTrialRecord:
    def test_requires_strict_time_order(self):
        with pytest.raises(PreconditionViolation):
            TrialRecord(t_selection=0.5, t_measurement=0.5, gamma=1, beta=1)
        with pytest.raises(PreconditionViolation):
            TrialRecord(t_selection=0.9, t_measurement=0.1, gamma=1, beta=1)

    def test_requires_sign_outcomes(self):
        with pytest.raises(PreconditionViolation):
            TrialRecord(t_selection=0.1, t_measurement=0.9, gamma=0, beta=1)


class TestRunSimulation:
    def test_identical_seeds_identical_reports(self):
        r1 = run_simulation(config())
        r2 = run_simulation(config())
        assert r1.to_json() == r2.to_json()

    def test_chunk_count_never_changes_results(self):
        reference = run_simulation(config(n=10_001)).to_json()
        for chunks in (2, 3, 7, 16, 10_001):
            assert run_simulation(config(n=10_001), n_chunks=chunks).to_json() == reference

    def test_time_mode_never_changes_outcomes(self):
        uniform = run_simulation(config())
        fixed = run_simulation(config(mode=TimeDistribution.FIXED_ORDER))
        np.testing.assert_array_equal(uniform.counts, fixed.counts)
        np.testing.assert_array_equal(
            uniform.estimated_conditionals, fixed.estimated_conditionals
        )

    def test_counts_partition_the_trials(self):
        report = run_simulation(config(n=5_000))
        assert int(report.counts.sum()) == 5_000

    def test_populated_columns_sum_to_one_exactly(self):
        report = run_simulation(config(n=3_333, q=0.37))
        sums = report.estimated_conditionals.sum(axis=0)
        assert sums[0] == 1.0 and sums[1] == 1.0

    def test_equal_angles_never_produce_agreement_on_plus(self):
        # sin^2(0) = 0: the (+,+) cell must be exactly empty
        report = run_simulation(config(xi=0.7, eta=0.7))
        assert report.counts[0, 0] == 0
        assert report.estimated_conditionals[0, 0] == 0.0

    def test_estimates_converge_to_closed_form(self):
        report = run_simulation(config(n=1_000_000))
        analytic = np.array([[0.25, 0.75], [0.75, 0.25]])
        deviation = np.abs(report.estimated_conditionals - analytic)
        assert np.all(deviation <= 4.0 * report.std_errors)

    def test_correlation_matches_counts(self):
        report = run_simulation(config(n=4_000))
        c = report.counts
        expected = (int(c[0, 0]) - int(c[1, 0]) - int(c[0, 1]) + int(c[1, 1])) / 4_000
        assert report.estimated_correlation == expected

    def test_degenerate_marginal_leaves_empty_column(self):
        report = run_simulation(config(n=500, q=1.0))
        assert report.counts[:, 1].sum() == 0
        assert np.isnan(report.estimated_conditionals[0, 1])
        assert np.isnan(report.std_errors[1, 1])
        # the populated column still behaves
        assert report.estimated_conditionals[:, 0].sum() == 1.0

    def test_empty_column_serializes_as_null(self):
        report = run_simulation(config(n=100, q=1.0))
        data = json.loads(report.to_json())
        assert data["estimated_conditionals"][0][1] is None
        rebuilt = SimReport.from_dict(data)
        assert rebuilt.to_json() == report.to_json()

    def test_report_dict_round_trip(self):
        report = run_simulation(config(n=999, seed=8, q=0.25))
        assert SimReport.from_dict(json.loads(report.to_json())).to_json() == report.to_json()

    def test_trial_log_replays_the_counts(self):
        buffer = io.StringIO()
        report = run_simulation(config(n=400, seed=3), trial_log=buffer)
        lines = buffer.getvalue().splitlines()
        assert len(lines) == 400
        counts = np.zeros((2, 2), dtype=int)
        for line in lines:
            rec = json.loads(line)
            TrialRecord(**rec)  # validates ordering and signs
            assert 0.0 <= rec["t_selection"] < rec["t_measurement"] <= 1.0
            counts[(1 - rec["beta"]) // 2, (1 - rec["gamma"]) // 2] += 1
        np.testing.assert_array_equal(counts, report.counts)

    def test_trial_log_is_chunk_invariant(self):
        b1, b2 = io.StringIO(), io.StringIO()
        run_simulation(config(n=500, seed=6), trial_log=b1)
        run_simulation(config(n=500, seed=6), n_chunks=9, trial_log=b2)
        assert b1.getvalue() == b2.getvalue()

    def test_fixed_order_logs_unit_interval_endpoints(self):
        buffer = io.StringIO()
        run_simulation(
            config(n=20, mode=TimeDistribution.FIXED_ORDER), trial_log=buffer
        )
        for line in buffer.getvalue().splitlines():
            rec = json.loads(line)
            assert rec["t_selection"] == 0.0 and rec["t_measurement"] == 1.0


class TestTimeOrderStatistics:
    def test_uniform_square_gap_moments(self):
        # |U - V| for independent uniforms: mean 1/3, variance 1/18
        n = 200_000
        stats = time_order_statistics(config(n=n, seed=11))
        assert stats.mean_gap == pytest.approx(1.0 / 3.0, abs=4.0 * math.sqrt(1.0 / 18.0 / n))
        assert stats.std_gap == pytest.approx(math.sqrt(1.0 / 18.0), abs=2e-3)
        assert 0.0 < stats.min_gap and stats.max_gap < 1.0

    def test_gaps_are_strictly_positive(self):
        stats = time_order_statistics(config(n=50_000, seed=19))
        assert stats.min_gap > 0.0

    def test_fixed_order_is_deterministic_unit_gap(self):
        stats = time_order_statistics(config(n=1_000, mode=TimeDistribution.FIXED_ORDER))
        assert stats.mean_gap == 1.0
        assert stats.std_gap == 0.0
        assert stats.min_gap == stats.max_gap == 1.0
        assert stats.n_redraws == 0

    def test_chunking_moves_moments_by_rounding_only(self):
        a = time_order_statistics(config(n=30_000, seed=5))
        b = time_order_statistics(config(n=30_000, seed=5), n_chunks=11)
        # per-gap data is identical; the accumulated moments may differ in
        # the last bit because float addition is not associative
        assert a.min_gap == b.min_gap and a.max_gap == b.max_gap
        assert a.n_redraws == b.n_redraws
        assert a.mean_gap == pytest.approx(b.mean_gap, rel=1e-14)
        assert a.std_gap == pytest.approx(b.std_gap, rel=1e-12)

    def test_redraws_are_rare_and_counted(self):
        stats = time_order_statistics(config(n=1_000_000, seed=42))
        # float collisions of two fresh 53-bit uniforms are astronomically
        # unlikely; the counter must agree
        assert stats.n_redraws == 0
        assert stats.redraw_fraction == 0.0


class TestSimulateChsh:
    def test_single_trial_values_are_quantized(self):
        # each correlator is +/-1 at n=1, so S lands on {-4,-2,0,2,4}
        values = {
            simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), 1, seed)
            for seed in range(40)
        }
        assert values <= {-4.0, -2.0, 0.0, 2.0, 4.0}
        assert len(values) > 1

    def test_deterministic_in_the_seed(self):
        s1 = simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), 20_000, 7)
        s2 = simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), 20_000, 7)
        assert s1 == s2

    def test_chunking_does_not_change_the_estimate(self):
        s1 = simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), 30_000, 3)
        s2 = simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), 30_000, 3, n_chunks=8)
        assert s1 == s2

    def test_converges_to_the_analytic_extreme(self):
        s = simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), 200_000, 99)
        assert s == pytest.approx(-2.0 * math.sqrt(2.0), abs=0.02)

    def test_rejects_zero_trials(self):
        with pytest.raises(InvalidCount):
            simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), 0, 1)

    def test_rejects_wide_seed(self):
        with pytest.raises(PreconditionViolation):
            simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), 10, 1 << 64)


class TestLhvBaseline:
    def test_deterministic_sign_matches_folded_linear_correlation(self):
        # per-pair correlators approach 1 - 2 d_eff / pi
        n = 400_000
        for delta, seed in ((math.pi / 8.0, 1), (3.0 * math.pi / 8.0, 2), (1.9, 3)):
            s = lhv_baseline_chsh(
                delta, delta, 0.0, 0.0, LhvStrategy.DETERMINISTIC_SIGN, n, seed
            )
            # S collapses to 2 E(delta) + E(delta) - E(delta) = 2 E(delta)
            expected = 2.0 * lhv_sign_correlation(delta)
            assert s == pytest.approx(expected, abs=5.0 / math.sqrt(n))

    def test_deterministic_sign_at_the_optimal_settings(self):
        n = 1_000_000
        s = lhv_baseline_chsh(*OPTIMAL, LhvStrategy.DETERMINISTIC_SIGN, n, 42)
        # analytic value: 3/4 - 1/4 + 3/4 + 3/4 = 2, the local extreme
        assert s == pytest.approx(2.0, abs=4.5 / math.sqrt(n))

    def test_random_local_centers_on_zero(self):
        s = lhv_baseline_chsh(*OPTIMAL, LhvStrategy.RANDOM_LOCAL, 500_000, 13)
        assert s == pytest.approx(0.0, abs=0.02)

    def test_deterministic_in_the_seed(self):
        s1 = lhv_baseline_chsh(*OPTIMAL, LhvStrategy.DETERMINISTIC_SIGN, 50_000, 21)
        s2 = lhv_baseline_chsh(*OPTIMAL, LhvStrategy.DETERMINISTIC_SIGN, 50_000, 21)
        assert s1 == s2

    def test_rejects_zero_trials(self):
        with pytest.raises(InvalidCount):
            lhv_baseline_chsh(*OPTIMAL, LhvStrategy.RANDOM_LOCAL, 0, 1)

    def test_rejects_unknown_strategy(self):
        with pytest.raises(PreconditionViolation):
            lhv_baseline_chsh(*OPTIMAL, "sign", 10, 1)

    def test_separation_from_the_interference_model(self):
        n = 200_000
        quantum = simulate_chsh(*OPTIMAL, BinaryDistribution.uniform(), n, 17)
        local = lhv_baseline_chsh(*OPTIMAL, LhvStrategy.DETERMINISTIC_SIGN, n, 17)
        assert abs(quantum) - abs(local) >= 0.5
