import dataclasses

import numpy as np
import pytest

from suskit.rng import derive_seed, float_key, substream
from suskit.simulation import (
    SimConfig,
    generate_study,
    pre_truncation_mean_for,
    run_coverage_experiment,
    run_rule3_validation,
    run_upper_bound_experiment,
    sample_mean_distribution,
    true_score_mean,
    truncated_moments,
)
from suskit.distributions import skew_normal_from_moments, skew_normal_sample

GRID = set(np.arange(0, 101, 2.5))


class TestStreams:
    def test_substream_deterministic_and_distinct(self):
        a = substream(5, 1, 2).standard_normal(4)
        b = substream(5, 1, 2).standard_normal(4)
        c = substream(5, 1, 3).standard_normal(4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_derive_seed_stable(self):
        assert derive_seed(5, 1, 2) == derive_seed(5, 1, 2)
        assert derive_seed(5, 1, 2) != derive_seed(5, 2, 1)

    def test_float_key_distinguishes_floats(self):
        assert float_key(-0.39) != float_key(0.39)
        assert float_key(0.825) == float_key(0.825)


class TestGenerateStudy:
    def test_rounding_lands_on_grid(self):
        cfg = SimConfig(round_to_grid=True)
        xs = generate_study(cfg, 50, -0.5, substream(1))
        assert set(np.unique(xs)) <= GRID

    def test_deterministic(self):
        cfg = SimConfig(truncate_at_100=True, round_to_grid=True)
        a = generate_study(cfg, 10, 0.3, substream(4, 10))
        b = generate_study(cfg, 10, 0.3, substream(4, 10))
        assert np.array_equal(a, b)

    def test_untruncated_moments(self):
        cfg = SimConfig(mean=68.0, sd=20.0)
        xs = generate_study(cfg, 1_000_000, 0.0, substream(2))
        assert xs.mean() == pytest.approx(68.0, abs=0.1)
        assert xs.std(ddof=1) == pytest.approx(20.0, abs=0.1)

    def test_truncation_respected(self):
        cfg = SimConfig(mean=85.0, sd=20.0, truncate_at_100=True)
        xs = generate_study(cfg, 5000, 0.4, substream(3))
        assert xs.max() <= 100.0

    def test_low_acceptance_rejected(self):
        cfg = SimConfig(mean=200.0, sd=10.0, truncate_at_100=True)
        with pytest.raises(ValueError, match="acceptance"):
            generate_study(cfg, 10, 0.0, substream(0))


class TestTruthValues:
    def test_plain_config_mean_passthrough(self):
        assert true_score_mean(SimConfig(mean=68.0), -0.4) == 68.0

    @pytest.mark.parametrize("trunc,rnd", [(True, False), (False, True), (True, True)])
    def test_matches_monte_carlo(self, trunc, rnd):
        cfg = SimConfig(mean=68.0, sd=20.0, truncate_at_100=trunc, round_to_grid=rnd)
        truth = true_score_mean(cfg, -0.39)
        xs = generate_study(cfg, 400_000, -0.39, substream(21))
        se = xs.std() / np.sqrt(xs.size)
        assert truth == pytest.approx(xs.mean(), abs=4 * se)

    def test_truncated_moments_oracle(self):
        params = skew_normal_from_moments(65, 20, -0.4)
        mean, sd, skew = truncated_moments(params)
        xs = skew_normal_sample(params, 1_000_000, substream(6))
        xs = xs[xs <= 100.0]
        assert mean == pytest.approx(xs.mean(), abs=0.1)
        assert sd == pytest.approx(xs.std(ddof=1), abs=0.1)

    def test_pre_truncation_solver(self):
        m = pre_truncation_mean_for(75.0, 20.0, -0.4)
        post_mean = truncated_moments(skew_normal_from_moments(m, 20.0, -0.4))[0]
        assert post_mean == pytest.approx(75.0, abs=1e-6)


class TestSampleMeanDistribution:
    def test_symmetric_parent_gives_unskewed_means(self):
        cfg = SimConfig(mean=68.0, sd=20.0, reps=100_000)
        d = sample_mean_distribution(cfg, n=5, skew=0.0)
        assert d.skewness_of_means == pytest.approx(0.0, abs=0.02)

    def test_density_integrates_to_one(self):
        cfg = SimConfig(reps=20_000, truncate_at_100=True, round_to_grid=True)
        d = sample_mean_distribution(cfg, n=5, skew=-0.4)
        widths = np.diff(d.bin_edges)
        assert float(np.sum(d.density * widths)) == pytest.approx(1.0, abs=1e-9)


FAST = SimConfig(mean=68.0, sd=20.0, skew_grid=(-0.5, 0.5), n_grid=(4, 6),
                 reps=40, bootstrap_b=1000, seed=123,
                 truncate_at_100=True, round_to_grid=True)


class TestExperiments:
    def test_coverage_deterministic_rerun(self):
        a = run_coverage_experiment(FAST)
        b = run_coverage_experiment(FAST)
        assert a == b

    def test_coverage_parallel_matches_serial(self):
        serial = run_coverage_experiment(FAST)
        parallel = run_coverage_experiment(dataclasses.replace(FAST, workers=2))
        assert serial == parallel

    def test_coverage_cell_shape(self):
        results = run_coverage_experiment(FAST)
        assert len(results) == 4
        for cell in results:
            for stats in (cell.t, cell.expanded_bca):
                assert 0.0 <= stats.coverage <= 1.0
                assert 0.0 <= stats.violation_rate <= 1.0
                assert stats.coverage_se <= 0.5 / np.sqrt(FAST.reps) + 1e-12
            assert cell.expanded_bca.violation_rate == 0.0

    def test_rule3_needs_large_n(self):
        with pytest.raises(ValueError):
            run_rule3_validation(FAST)

    def test_rule3_single_rep_coverage_is_binary(self):
        cfg = dataclasses.replace(FAST, n_grid=(9,), skew_grid=(0.0,), reps=1)
        summary = run_rule3_validation(cfg)
        assert summary.cells[0].coverage in (0.0, 1.0)

    def test_rule3_se_shrinks_with_reps(self):
        small = dataclasses.replace(FAST, n_grid=(9,), skew_grid=(0.0,), reps=40)
        big = dataclasses.replace(small, reps=400)
        se_small = run_rule3_validation(small).cells[0].coverage_se
        se_big = run_rule3_validation(big).cells[0].coverage_se
        assert se_big < se_small

    def test_upper_bound_degenerate_limit(self):
        cfg = SimConfig(mean=95.0, sd=0.01, skew_grid=(0.0,), n_grid=(4,),
                        reps=10, bootstrap_b=1000, seed=5)
        summary = run_upper_bound_experiment(cfg, threshold=70.0)
        assert summary.t_contains == 1.0
        assert summary.bca_contains == 1.0

    def test_config_round_trip(self):
        raw = FAST.to_dict()
        assert SimConfig.from_dict(raw) == FAST
        with pytest.raises(ValueError, match="unknown"):
            SimConfig.from_dict({"mystery": 1})
