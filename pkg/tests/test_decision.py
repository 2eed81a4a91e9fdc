import json

import numpy as np
import pytest

from suskit.bayes import PriorSpec
from suskit.decision import (
    Rule,
    builtin_scales,
    load_scales,
    map_to_labels,
    recommend,
    select_interval,
)
from suskit.intervals import BootstrapConfig, Method, _build
from suskit.scoring import study_summary


def scale_by_name(name):
    return next(s for s in builtin_scales() if s.name == name)


class TestRecommend:
    @pytest.mark.parametrize("n,rule,methods", [
        (1, Rule.SMALL, (Method.BAYES,)),
        (4, Rule.SMALL, (Method.BAYES,)),
        (5, Rule.SMALL, (Method.BAYES,)),
        (6, Rule.MID, (Method.EXPANDED_BCA,)),
        (7, Rule.MID, (Method.EXPANDED_BCA,)),
        (8, Rule.MID, (Method.EXPANDED_BCA,)),
        (9, Rule.LARGE, (Method.T, Method.EXPANDED_BCA)),
        (12, Rule.LARGE, (Method.T, Method.EXPANDED_BCA)),
        (250, Rule.LARGE, (Method.T, Method.EXPANDED_BCA)),
    ])
    def test_rules(self, n, rule, methods):
        plan = recommend(n)
        assert plan.rule_fired is rule
        assert plan.recommended == methods

    def test_rule1_carries_prior_caveat(self):
        assert any("similar" in c for c in recommend(3).caveats)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            recommend(0)

    def test_partition_total_and_exclusive(self):
        for n in range(1, 40):
            fired = recommend(n).rule_fired
            expected = Rule.SMALL if n <= 5 else Rule.MID if n <= 8 else Rule.LARGE
            assert fired is expected


class TestBuiltinScales:
    def test_four_scales(self):
        assert [s.name for s in builtin_scales()] == [
            "acceptability", "grades", "adjectives", "percentiles",
        ]

    def test_acceptability_has_three_bands(self):
        scale = scale_by_name("acceptability")
        assert [b.label for b in scale.bands] == ["not acceptable", "marginal", "acceptable"]

    def test_grades_contiguous_and_ordered(self):
        scale = scale_by_name("grades")
        labels = [b.label for b in scale.bands]
        assert labels == ["F", "D", "C-", "C", "C+", "B-", "B", "B+", "A-", "A", "A+"]
        assert scale.bands[0].lower == 0.0
        assert scale.bands[-1].upper == 100.0
        for prev, cur in zip(scale.bands, scale.bands[1:]):
            assert prev.upper == cur.lower

    def test_percentile_anchor_at_68(self):
        span = map_to_labels(_build(68.0, 68.0, 0.95, Method.T), scale_by_name("percentiles"))
        assert span.lower_percentile == 50.0
        assert span.upper_percentile == 50.0

    def test_band_partitions(self):
        for scale in builtin_scales():
            if scale.kind != "bands":
                continue
            assert scale.bands[0].lower == 0.0
            assert scale.bands[-1].upper == 100.0
            for prev, cur in zip(scale.bands, scale.bands[1:]):
                assert prev.upper == pytest.approx(cur.lower, abs=1e-12)


class TestMapToLabels:
    def test_single_band(self):
        span = map_to_labels(_build(71.0, 95.0, 0.95, Method.T), scale_by_name("acceptability"))
        assert span.bands_touched == ("acceptable",)

    def test_straddles_two_breakpoints(self):
        span = map_to_labels(_build(45.0, 72.0, 0.95, Method.T), scale_by_name("acceptability"))
        assert span.bands_touched == ("not acceptable", "marginal", "acceptable")

    def test_degenerate_interval(self):
        span = map_to_labels(_build(55.0, 55.0, 0.95, Method.T), scale_by_name("acceptability"))
        assert span.bands_touched == ("marginal",)
        assert span.lower_label == span.upper_label == "marginal"

    def test_violating_interval_clamped(self):
        span = map_to_labels(_build(78.6, 102.4, 0.95, Method.T), scale_by_name("acceptability"))
        assert span.clamped
        assert span.bands_touched == ("acceptable",)

    def test_shrinking_never_adds_bands(self):
        scale = scale_by_name("grades")
        wide = map_to_labels(_build(48.0, 86.0, 0.95, Method.T), scale)
        rng = np.random.default_rng(3)
        for _ in range(40):
            lo = rng.uniform(48.0, 66.0)
            hi = rng.uniform(lo, 86.0)
            inner = map_to_labels(_build(lo, hi, 0.95, Method.T), scale)
            assert set(inner.bands_touched) <= set(wide.bands_touched)

    def test_percentile_interpolation_monotone(self):
        scale = scale_by_name("percentiles")
        span_lo = map_to_labels(_build(40.0, 60.0, 0.95, Method.T), scale)
        span_hi = map_to_labels(_build(60.0, 80.0, 0.95, Method.T), scale)
        assert span_lo.lower_percentile < span_lo.upper_percentile
        assert span_lo.upper_percentile == span_hi.lower_percentile


class TestScaleFiles:
    def test_gap_rejected(self, tmp_path):
        bad = [{"name": "x", "provenance": "", "bands": [
            {"label": "a", "lower": 0, "upper": 40},
            {"label": "b", "lower": 45, "upper": 100},
        ]}]
        path = tmp_path / "scales.json"
        path.write_text(json.dumps(bad))
        with pytest.raises(ValueError, match="gap or overlap"):
            load_scales(str(path))

    def test_wrong_span_rejected(self, tmp_path):
        bad = [{"name": "x", "provenance": "", "bands": [
            {"label": "a", "lower": 0, "upper": 90},
        ]}]
        path = tmp_path / "scales.json"
        path.write_text(json.dumps(bad))
        with pytest.raises(ValueError, match="span"):
            load_scales(str(path))

    def test_valid_override_loads(self, tmp_path):
        good = [{"name": "binary", "provenance": "local policy", "bands": [
            {"label": "fail", "lower": 0, "upper": 68},
            {"label": "pass", "lower": 68, "upper": 100},
        ]}]
        path = tmp_path / "scales.json"
        path.write_text(json.dumps(good))
        scales = load_scales(str(path))
        assert scales[0].name == "binary"
        assert len(scales[0].bands) == 2

    def test_nonmonotone_anchors_rejected(self, tmp_path):
        bad = [{"name": "p", "provenance": "", "anchors": [[0, 0], [50, 60], [49, 70], [100, 100]]}]
        path = tmp_path / "scales.json"
        path.write_text(json.dumps(bad))
        with pytest.raises(ValueError, match="strictly increasing"):
            load_scales(str(path))


class TestSelectInterval:
    def test_rule3_discards_violating_t(self):
        scores = [100.0] * 6 + [80.0] * 3  # t upper lands above 100
        study = study_summary(scores)
        result = select_interval(study, 0.95, BootstrapConfig(4000, seed=1))
        assert result.plan.rule_fired is Rule.LARGE
        assert result.intervals[Method.T].diagnostics.violates_upper
        assert result.selected is Method.EXPANDED_BCA

    def test_rule3_prefers_narrower_abiding_t(self):
        scores = [95.0, 75.0, 72.5, 75.0, 55.0, 40.0, 77.5, 65.0, 50.0]
        study = study_summary(scores)
        result = select_interval(study, 0.95, BootstrapConfig(4000, seed=1))
        t_iv = result.intervals[Method.T]
        bca_iv = result.intervals[Method.EXPANDED_BCA]
        assert not t_iv.diagnostics.violates_upper and not t_iv.diagnostics.violates_lower
        assert t_iv.diagnostics.width < bca_iv.diagnostics.width
        assert result.selected is Method.T

    def test_rule1_selects_bayes_with_credible_annotation(self):
        result = select_interval(study_summary([97.5, 97.5, 97.5, 80, 80]), 0.95,
                                 BootstrapConfig(2000, seed=0))
        assert result.selected is Method.BAYES
        assert result.interval_kind == "credible"
        assert any("credible" in w for w in result.warnings)
        assert any("similar" in w for w in result.warnings)

    def test_selected_never_violates_when_an_abiding_candidate_exists(self):
        rng = np.random.default_rng(8)
        for _ in range(15):
            n = int(rng.integers(2, 14))
            scores = np.round(rng.uniform(0, 100, n) / 2.5) * 2.5
            result = select_interval(study_summary(scores), 0.95, BootstrapConfig(1500, seed=3))
            candidates = result.intervals.values()
            if any(not (c.diagnostics.violates_lower or c.diagnostics.violates_upper)
                   for c in candidates):
                sel = result.intervals[result.selected]
                assert not (sel.diagnostics.violates_lower or sel.diagnostics.violates_upper)

    def test_unavailable_methods_warned_not_fatal(self):
        result = select_interval(study_summary([80.0]), 0.95, BootstrapConfig(2000, seed=0))
        assert result.selected is Method.BAYES
        assert Method.T not in result.intervals
        assert any("unavailable" in w for w in result.warnings)

    def test_labels_cover_all_scales(self):
        result = select_interval(study_summary([70, 75, 80, 85]), 0.95,
                                 BootstrapConfig(2000, seed=0))
        assert set(result.labels) == {"acceptability", "grades", "adjectives", "percentiles"}

    def test_prior_override_shifts_bayes(self):
        from suskit.distributions import TruncatedNormalParams

        study = study_summary([50, 55, 60])
        base = select_interval(study, 0.95, BootstrapConfig(1000, seed=0))
        shifted = select_interval(
            study, 0.95, BootstrapConfig(1000, seed=0),
            PriorSpec(TruncatedNormalParams(30.0, 12.0, 0.0, 100.0), 30.0),
        )
        assert shifted.intervals[Method.BAYES].lower < base.intervals[Method.BAYES].lower
