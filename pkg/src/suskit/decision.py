"""Sample-size decision rules, method selection, and usability-label mapping."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from . import bayes as bayes_mod
from .bayes import PosteriorGrid, PriorSpec
from .intervals import (
    SCORE_BOUNDS,
    BootstrapConfig,
    Interval,
    Method,
    bca_interval,
    expanded_bca_interval,
    percentile_bootstrap,
    t_interval,
    truncation_adjusted_t_interval,
)
from .scoring import Study

__all__ = [
    "Rule",
    "MethodPlan",
    "Band",
    "LabelScale",
    "LabelSpan",
    "AnalysisResult",
    "recommend",
    "select_interval",
    "map_to_labels",
    "builtin_scales",
    "load_scales",
    "BAYES_PRIOR_CAVEAT",
]

BAYES_PRIOR_CAVEAT = (
    "assumes the current study's SUS scores are likely similar to those "
    "collected in the past"
)

WIDTH_TIE_TOLERANCE = 1e-9


class Rule(str, enum.Enum):
    SMALL = "Rule1_nLE5"
    MID = "Rule2_n6to8"
    LARGE = "Rule3_nGE9"


@dataclass(frozen=True)
class MethodPlan:
    recommended: tuple[Method, ...]
    rule_fired: Rule
    rationale: str
    caveats: tuple[str, ...] = ()


def recommend(n: int) -> MethodPlan:
    """Recommended interval method(s) as a function of sample size alone."""
    if n < 1:
        raise ValueError(f"sample size must be at least 1, got {n}")
    if n <= 5:
        return MethodPlan(
            (Method.BAYES,),
            Rule.SMALL,
            "With 5 or fewer respondents both the t and the expanded BCa "
            "intervals have significant shortcomings; the empirical Bayes "
            "credible interval brings in historical SUS evidence instead.",
            (BAYES_PRIOR_CAVEAT,),
        )
    if n <= 8:
        return MethodPlan(
            (Method.EXPANDED_BCA,),
            Rule.MID,
            "For 6 to 8 respondents the expanded BCa bootstrap keeps coverage "
            "comparable to the t interval with similar or narrower widths, and "
            "its bounds always stay inside the score range.",
        )
    return MethodPlan(
        (Method.T, Method.EXPANDED_BCA),
        Rule.LARGE,
        "With 9 or more respondents construct both the t and the expanded BCa "
        "intervals and report whichever is narrower while staying inside the "
        "score range.",
    )


@dataclass(frozen=True)
class Band:
    label: str
    lower: float
    upper: float


@dataclass(frozen=True)
class LabelScale:
    """Either a band partition of [0, 100] or monotone score->percentile anchors."""

    name: str
    provenance: str
    bands: tuple[Band, ...] = ()
    anchors: tuple[tuple[float, float], ...] = ()

    @property
    def kind(self) -> str:
        return "percentile" if self.anchors else "bands"


@dataclass(frozen=True)
class LabelSpan:
    """Labels intersected by an interval on one scale."""

    scale: str
    bands_touched: tuple[str, ...] = ()
    lower_label: str | None = None
    upper_label: str | None = None
    lower_percentile: float | None = None
    upper_percentile: float | None = None
    clamped: bool = False


def _validate_scale(raw: dict) -> LabelScale:
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise ValueError("scale entry is missing a name")
    provenance = raw.get("provenance", "")
    lo, hi = SCORE_BOUNDS
    if "bands" in raw:
        bands = tuple(Band(b["label"], float(b["lower"]), float(b["upper"])) for b in raw["bands"])
        if not bands:
            raise ValueError(f"scale {name!r}: band list is empty")
        if abs(bands[0].lower - lo) > 1e-9 or abs(bands[-1].upper - hi) > 1e-9:
            raise ValueError(f"scale {name!r}: bands must span [{lo:g}, {hi:g}]")
        for prev, cur in zip(bands, bands[1:]):
            if abs(prev.upper - cur.lower) > 1e-9:
                raise ValueError(
                    f"scale {name!r}: gap or overlap between {prev.label!r} and {cur.label!r}"
                )
        for b in bands:
            if not b.lower < b.upper:
                raise ValueError(f"scale {name!r}: band {b.label!r} has nonpositive width")
        return LabelScale(name, provenance, bands=bands)
    if "anchors" in raw:
        anchors = tuple((float(s), float(p)) for s, p in raw["anchors"])
        if len(anchors) < 2:
            raise ValueError(f"scale {name!r}: needs at least 2 anchor points")
        scores = [s for s, _ in anchors]
        pcts = [p for _, p in anchors]
        if scores[0] != lo or scores[-1] != hi:
            raise ValueError(f"scale {name!r}: anchors must span [{lo:g}, {hi:g}]")
        if any(b <= a for a, b in zip(scores, scores[1:])):
            raise ValueError(f"scale {name!r}: anchor scores must be strictly increasing")
        if any(b < a for a, b in zip(pcts, pcts[1:])):
            raise ValueError(f"scale {name!r}: percentiles must be nondecreasing")
        return LabelScale(name, provenance, anchors=anchors)
    raise ValueError(f"scale {name!r}: needs either 'bands' or 'anchors'")


def _parse_scales(raw) -> tuple[LabelScale, ...]:
    if not isinstance(raw, list):
        raise ValueError("scale file must hold a JSON array of scales")
    scales = tuple(_validate_scale(entry) for entry in raw)
    names = [s.name for s in scales]
    if len(set(names)) != len(names):
        raise ValueError("scale names must be unique")
    return scales


@lru_cache(maxsize=1)
def builtin_scales() -> tuple[LabelScale, ...]:
    """The four shipped scales: acceptability, grades, adjectives, percentiles."""
    text = resources.files("suskit").joinpath("data/scales.json").read_text(encoding="utf-8")
    return _parse_scales(json.loads(text))


def load_scales(path: str) -> tuple[LabelScale, ...]:
    """Load and validate a user-supplied scale file (same JSON shape as shipped)."""
    with open(path, encoding="utf-8") as fh:
        return _parse_scales(json.load(fh))


def _band_of(scale: LabelScale, x: float) -> Band:
    # Bands are half-open [lower, upper) except the last, which is closed.
    for b in scale.bands[:-1]:
        if b.lower <= x < b.upper:
            return b
    return scale.bands[-1]


def map_to_labels(interval: Interval, scale: LabelScale) -> LabelSpan:
    """Every label the interval touches on the scale (or interpolated percentiles).

    Intervals escaping [0, 100] are clamped for display and flagged.
    """
    lo, hi = SCORE_BOUNDS
    lower = min(max(interval.lower, lo), hi)
    upper = min(max(interval.upper, lo), hi)
    clamped = (lower, upper) != (interval.lower, interval.upper)
    if scale.kind == "percentile":
        scores = [s for s, _ in scale.anchors]
        pcts = [p for _, p in scale.anchors]
        return LabelSpan(
            scale=scale.name,
            lower_percentile=float(np.interp(lower, scores, pcts)),
            upper_percentile=float(np.interp(upper, scores, pcts)),
            clamped=clamped,
        )
    lower_band = _band_of(scale, lower)
    upper_band = _band_of(scale, upper)
    touched = tuple(
        b.label
        for b in scale.bands
        if max(lower, b.lower) < min(upper, b.upper) or b in (lower_band, upper_band)
    )
    return LabelSpan(
        scale=scale.name,
        bands_touched=touched,
        lower_label=lower_band.label,
        upper_label=upper_band.label,
        clamped=clamped,
    )


@dataclass(frozen=True)
class AnalysisResult:
    study: Study
    plan: MethodPlan
    intervals: dict[Method, Interval]
    selected: Method
    labels: dict[str, LabelSpan]
    warnings: tuple[str, ...]
    posterior: PosteriorGrid | None = None

    @property
    def selected_interval(self) -> Interval:
        return self.intervals[self.selected]

    @property
    def interval_kind(self) -> str:
        """Either "credible" (Bayes) or "confidence" (frequentist methods)."""
        return "credible" if self.selected == Method.BAYES else "confidence"


def _abides(interval: Interval) -> bool:
    return not (interval.diagnostics.violates_lower or interval.diagnostics.violates_upper)


def _pick_rule3(t_iv: Interval, bca_iv: Interval) -> Method:
    if not _abides(t_iv):
        return Method.EXPANDED_BCA
    if not _abides(bca_iv):
        return Method.T
    # Both abide: take the narrower; ties go to the conventional t report.
    if bca_iv.diagnostics.width < t_iv.diagnostics.width - WIDTH_TIE_TOLERANCE:
        return Method.EXPANDED_BCA
    return Method.T


def select_interval(study: Study, level: float = 0.95,
                    cfg: BootstrapConfig = BootstrapConfig(),
                    prior: PriorSpec = PriorSpec(),
                    scales: tuple[LabelScale, ...] | None = None,
                    mu_steps: int = bayes_mod.DEFAULT_MU_STEPS,
                    sigma_steps: int = bayes_mod.DEFAULT_SIGMA_STEPS) -> AnalysisResult:
    """Run the decision rules and compute all applicable intervals.

    The rule-recommended method drives selection; the remaining methods are
    still computed so callers can display them flagged as not recommended.
    Methods whose sample-size preconditions fail are skipped with a warning.
    """
    plan = recommend(study.n)
    warnings: list[str] = list(plan.caveats)
    intervals: dict[Method, Interval] = {}

    constructors = {
        Method.T: lambda: t_interval(study, level),
        Method.TRUNC_ADJUSTED_T: lambda: truncation_adjusted_t_interval(study, level),
        Method.PERCENTILE: lambda: percentile_bootstrap(study.scores, level, cfg),
        Method.BCA: lambda: bca_interval(study.scores, level, cfg),
        Method.EXPANDED_BCA: lambda: expanded_bca_interval(study.scores, level, cfg),
    }
    for method, make in constructors.items():
        try:
            intervals[method] = make()
        except ValueError as err:
            warnings.append(f"{method.value} interval unavailable: {err}")

    posterior = bayes_mod.posterior_grid(study.scores, prior, mu_steps, sigma_steps)
    intervals[Method.BAYES] = bayes_mod.credible_interval(posterior, level)

    if plan.rule_fired is Rule.LARGE:
        selected = _pick_rule3(intervals[Method.T], intervals[Method.EXPANDED_BCA])
    else:
        selected = plan.recommended[0]
    if selected is Method.BAYES:
        warnings.append("the selected interval is a credible interval, not a confidence interval")

    for iv in intervals.values():
        warnings.extend(iv.warnings)

    scales = builtin_scales() if scales is None else scales
    labels = {s.name: map_to_labels(intervals[selected], s) for s in scales}
    return AnalysisResult(study, plan, intervals, selected, labels, tuple(warnings), posterior)
