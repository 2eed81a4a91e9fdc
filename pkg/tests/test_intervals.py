"""Interval-constructor checks.

The percentile oracle for the {97.5 x3, 80 x2} dataset is exact: a resample
mean is (k*97.5 + (5-k)*80)/5 with k ~ Binomial(5, 0.6), so true percentiles
of the resample-mean distribution follow from the binomial CDF with no
simulation involved.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suskit import intervals as iv
from suskit.intervals import (
    BootstrapConfig,
    Method,
    bca_alpha_adjust,
    bca_interval,
    expanded_bca_interval,
    expansion_quantile,
    interval_diagnostics,
    jackknife_acceleration,
    percentile_bootstrap,
    t_interval,
    truncation_adjusted_t_interval,
    z_interval,
)
from suskit.scoring import study_summary

WORKED = [97.5, 97.5, 97.5, 80.0, 80.0]
WORKED_RESAMPLE_MEANS = {80.0, 83.5, 87.0, 90.5, 94.0, 97.5}

# mpmath-frozen oracle for the truncation-adjusted lower bound of WORKED
ADJUSTED_LOWER = 70.16036948
# Phi(0.2 + Phi^-1(0.025)) from the erf oracle at full quantile precision
BCA_ALPHA1_EXAMPLE = 0.0392069566438979


def exact_percentile_bounds(alpha_half: float) -> tuple[float, float]:
    """True resample-mean percentiles for WORKED via binomial enumeration."""
    pmf = [math.comb(5, k) * 0.6**k * 0.4 ** (5 - k) for k in range(6)]
    cdf = np.cumsum(pmf)
    values = [80.0 + 3.5 * k for k in range(6)]
    lower = values[int(np.searchsorted(cdf, alpha_half, side="left"))]
    upper = values[int(np.searchsorted(cdf, 1 - alpha_half, side="left"))]
    return lower, upper


class TestZAndT:
    def test_z_worked_example(self):
        z = z_interval(study_summary(WORKED), 0.95)
        assert z.lower == pytest.approx(82.10, abs=0.01)
        assert z.upper == pytest.approx(98.90, abs=0.01)

    def test_degenerate(self):
        z = z_interval(study_summary([70, 70, 70]), 0.95)
        assert (z.lower, z.upper) == (70.0, 70.0)
        assert z.diagnostics.degenerate

    def test_width_grows_with_level(self):
        s = study_summary(WORKED)
        widths = [z_interval(s, lvl).diagnostics.width for lvl in (0.5, 0.8, 0.95, 0.999)]
        assert widths == sorted(widths)

    def test_t_worked_example(self):
        t = t_interval(study_summary(WORKED), 0.95)
        assert t.lower == pytest.approx(78.60, abs=0.15)
        assert t.upper == pytest.approx(102.40, abs=0.15)
        assert t.diagnostics.violates_upper and not t.diagnostics.violates_lower

    def test_t_wider_than_z(self):
        rng = np.random.default_rng(5)
        for n in (2, 3, 5, 12, 40):
            s = study_summary(rng.uniform(20, 90, n))
            if s.sd == 0:
                continue
            assert (t_interval(s).diagnostics.width
                    > z_interval(s).diagnostics.width)

    def test_t_symmetric_about_mean(self):
        s = study_summary([40, 55, 61, 70, 88])
        t = t_interval(s)
        assert (t.upper - s.mean) == pytest.approx(s.mean - t.lower, abs=1e-12)

    def test_needs_two_scores(self):
        with pytest.raises(ValueError):
            t_interval(study_summary([50.0]))


class TestTruncationAdjustedT:
    def test_worked_example(self):
        adj = truncation_adjusted_t_interval(study_summary(WORKED), 0.95)
        assert adj.upper == 100.0
        assert adj.lower == pytest.approx(70.0, abs=0.5)
        assert adj.lower == pytest.approx(ADJUSTED_LOWER, abs=1e-6)
        assert adj.method is Method.TRUNC_ADJUSTED_T

    def test_holds_nominal_t_probability(self):
        # mass between the shifted bounds must equal the level exactly
        from suskit.distributions import t_cdf

        s = study_summary(WORKED)
        adj = truncation_adjusted_t_interval(s, 0.95)
        se = s.sd / math.sqrt(s.n)
        mass = t_cdf((adj.upper - s.mean) / se, s.n - 1) - t_cdf((adj.lower - s.mean) / se, s.n - 1)
        assert mass == pytest.approx(0.95, abs=1e-9)

    def test_no_violation_returns_t_bounds(self):
        s = study_summary([40, 50, 55, 60, 70])
        t = t_interval(s, 0.95)
        adj = truncation_adjusted_t_interval(s, 0.95)
        assert not t.diagnostics.violates_lower and not t.diagnostics.violates_upper
        assert (adj.lower, adj.upper) == (t.lower, t.upper)

    def test_lower_violation_mirror(self):
        s = study_summary([2.5, 2.5, 2.5, 20, 20])
        t = t_interval(s, 0.95)
        assert t.diagnostics.violates_lower
        adj = truncation_adjusted_t_interval(s, 0.95)
        assert adj.lower == 0.0
        assert adj.upper > t.upper

    def test_both_violations_return_parameter_space(self):
        s = study_summary([1.0, 50.0, 99.0])
        t = t_interval(s, 0.99)
        assert t.diagnostics.violates_lower and t.diagnostics.violates_upper
        adj = truncation_adjusted_t_interval(s, 0.99)
        assert (adj.lower, adj.upper) == (0.0, 100.0)
        assert not adj.diagnostics.degenerate
        assert adj.warnings

    def test_unattainable_level_after_shift(self):
        # n=2 far-tail level: even pinning at 100 cannot place 99.9% inside
        s = study_summary([95.0, 99.0])
        adj = truncation_adjusted_t_interval(s, 0.999)
        assert (adj.lower, adj.upper) == (0.0, 100.0)
        assert adj.warnings


class TestPercentileBootstrap:
    def test_exact_oracle_equivalence(self):
        expected = exact_percentile_bounds(0.025)
        assert expected == (83.5, 97.5)
        got = percentile_bootstrap(WORKED, 0.95, BootstrapConfig(100_000, seed=2))
        assert (got.lower, got.upper) == expected

    def test_constant_data(self):
        got = percentile_bootstrap([60.0, 60.0, 60.0], 0.95, BootstrapConfig(2000, seed=0))
        assert (got.lower, got.upper) == (60.0, 60.0)
        assert got.diagnostics.degenerate

    def test_same_seed_same_interval(self):
        cfg = BootstrapConfig(5000, seed=9)
        a = percentile_bootstrap(WORKED, 0.95, cfg)
        b = percentile_bootstrap(WORKED, 0.95, cfg)
        assert (a.lower, a.upper) == (b.lower, b.upper)

    def test_small_b_warning(self):
        got = percentile_bootstrap(WORKED, 0.95, BootstrapConfig(500, seed=0))
        assert any("below 1000" in w for w in got.warnings)


class TestBcaPieces:
    def test_alpha_adjust_reduces_to_percentile(self):
        a1, a2 = bca_alpha_adjust(0.0, 0.0, 0.025)
        assert a1 == pytest.approx(0.025, abs=1e-12)
        assert a2 == pytest.approx(0.975, abs=1e-12)

    def test_alpha_adjust_bias_only(self):
        a1, _ = bca_alpha_adjust(0.1, 0.0, 0.025)
        assert a1 == pytest.approx(BCA_ALPHA1_EXAMPLE, abs=1e-9)

    def test_alpha_adjust_degenerate_denominator(self):
        from suskit.distributions import normal_quantile

        z = normal_quantile(0.975)
        with pytest.raises(ValueError):
            bca_alpha_adjust(0.0, 1.0 / z, 0.025)

    def test_jackknife_symmetric(self):
        assert jackknife_acceleration([10, 20, 30]) == pytest.approx(0.0, abs=1e-14)

    def test_jackknife_worked_example(self):
        # leave-one-out means {88.75 x3, 93.125 x2}: sum d^2 = 22.96875,
        # sum d^3 = -20.09765625
        assert jackknife_acceleration(WORKED) == pytest.approx(-0.03043, abs=1e-5)

    def test_jackknife_sign_opposes_loo_skewness(self):
        from suskit.distributions import sample_skewness

        rng = np.random.default_rng(17)
        for _ in range(20):
            xs = rng.uniform(0, 100, 8)
            loo = (xs.sum() - xs) / 7
            if np.std(loo) < 1e-9:
                continue
            assert np.sign(jackknife_acceleration(xs)) == -np.sign(sample_skewness(loo))

    def test_jackknife_constant(self):
        with pytest.raises(ValueError):
            jackknife_acceleration([5.0, 5.0, 5.0])

    def test_expansion_quantile_values(self):
        assert expansion_quantile(0.95, 5) == pytest.approx(9.541e-4, abs=1e-6)
        assert expansion_quantile(0.95, 10**6) == pytest.approx(0.025, abs=1e-5)
        assert expansion_quantile(0.95, 2) < 1e-15


class TestBcaIntervals:
    def test_expanded_matches_paper_for_any_seed(self):
        for seed in range(5):
            got = expanded_bca_interval(WORKED, 0.95, BootstrapConfig(100_000, seed=seed))
            assert (got.lower, got.upper) == (80.0, 97.5)

    def test_bounds_live_on_resample_mean_grid(self):
        for seed in (11, 12, 13):
            got = expanded_bca_interval(WORKED, 0.95, BootstrapConfig(2000, seed=seed))
            assert got.lower in WORKED_RESAMPLE_MEANS
            assert got.upper in WORKED_RESAMPLE_MEANS

    def test_constant_data_degenerates(self):
        got = bca_interval([42.5] * 5, 0.95, BootstrapConfig(2000, seed=0))
        assert (got.lower, got.upper) == (42.5, 42.5)
        assert any("identical" in w for w in got.warnings)

    def test_needs_three_scores(self):
        with pytest.raises(ValueError):
            bca_interval([50.0, 60.0], 0.95, BootstrapConfig(2000, seed=0))

    def test_degenerate_bias_falls_back_to_percentile(self, monkeypatch):
        scores = np.array([50.0, 60.0, 70.0])
        fake = np.sort(np.full(2000, 60.0) + np.linspace(0, 1, 2000))  # no mean below 60
        monkeypatch.setattr(iv, "_resample_means", lambda xs, cfg: fake)
        got = bca_interval(scores, 0.95, BootstrapConfig(2000, seed=0))
        assert any("bias factor undefined" in w for w in got.warnings)
        assert got.lower == iv._order_statistic(fake, 0.025)
        assert got.upper == iv._order_statistic(fake, 0.975)

    def test_forced_zero_factors_equal_percentile_bit_exact(self):
        xs = np.asarray(WORKED)
        cfg = BootstrapConfig(50_000, seed=4)
        means = iv._resample_means(xs, cfg)
        a1, a2 = bca_alpha_adjust(0.0, 0.0, 0.025)
        assert iv._order_statistic(means, a1) == iv._order_statistic(means, 0.025)
        assert iv._order_statistic(means, a2) == iv._order_statistic(means, 0.975)

    def test_expansion_widens_on_shared_resamples(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            xs = np.round(rng.uniform(0, 100, rng.integers(3, 12)) / 2.5) * 2.5
            if xs.std() == 0:
                continue
            cfg = BootstrapConfig(3000, seed=int(rng.integers(0, 10_000)))
            plain = bca_interval(xs, 0.95, cfg)
            wide = expanded_bca_interval(xs, 0.95, cfg)
            assert wide.diagnostics.width >= plain.diagnostics.width - 1e-12


@given(
    st.lists(st.sampled_from([0.0, 2.5, 25.0, 50.0, 77.5, 97.5, 100.0]), min_size=2, max_size=10),
    st.integers(min_value=0, max_value=2**32 - 1),
)
@settings(max_examples=60, deadline=None)
def test_bootstrap_family_respects_score_range(scores, seed):
    cfg = BootstrapConfig(1200, seed=seed)
    lo, hi = min(scores), max(scores)
    got = percentile_bootstrap(scores, 0.95, cfg)
    assert lo <= got.lower <= got.upper <= hi
    if len(scores) >= 3:
        for ctor in (bca_interval, expanded_bca_interval):
            got = ctor(scores, 0.95, cfg)
            assert lo <= got.lower <= got.upper <= hi


class TestDiagnostics:
    def test_violating_interval(self):
        d = interval_diagnostics(iv._build(78.6, 102.4, 0.95, Method.T))
        assert d.violates_upper and not d.violates_lower
        assert d.width == pytest.approx(23.8)

    def test_inside(self):
        d = interval_diagnostics(iv._build(40.0, 60.0, 0.95, Method.T))
        assert not (d.violates_lower or d.violates_upper or d.degenerate)

    def test_degenerate(self):
        d = interval_diagnostics(iv._build(55.0, 55.0, 0.95, Method.T))
        assert d.degenerate and d.width == 0.0
