"""Result payload assembly shared by the CLI and the HTTP service.

Everything user-facing flows through build_payload so the JSON emitted by
``suskit analyze --format json`` and by POST /api/analyze is the same object,
byte for byte, given the same inputs and seed.
"""

from __future__ import annotations

import numpy as np

from .bayes import PosteriorGrid
from .decision import AnalysisResult, LabelScale, LabelSpan, map_to_labels
from .intervals import Interval, Method

__all__ = ["SCHEMA_VERSION", "build_payload"]

SCHEMA_VERSION = "1"


def _interval_entry(method: Method, iv: Interval, recommended: bool, selected: bool) -> dict:
    return {
        "method": method.value,
        "lower": float(iv.lower),
        "upper": float(iv.upper),
        "level": float(iv.level),
        "recommended": recommended,
        "selected": selected,
        "diagnostics": {
            "violates_lower": iv.diagnostics.violates_lower,
            "violates_upper": iv.diagnostics.violates_upper,
            "width": float(iv.diagnostics.width),
            "degenerate": iv.diagnostics.degenerate,
        },
        "warnings": list(iv.warnings),
    }


def _label_entry(span: LabelSpan) -> dict:
    if span.lower_percentile is not None:
        return {
            "kind": "percentile",
            "lower_percentile": span.lower_percentile,
            "upper_percentile": span.upper_percentile,
            "clamped": span.clamped,
        }
    return {
        "kind": "bands",
        "bands_touched": list(span.bands_touched),
        "lower_label": span.lower_label,
        "upper_label": span.upper_label,
        "clamped": span.clamped,
    }


def _scale_entry(scale: LabelScale) -> dict:
    if scale.kind == "percentile":
        return {
            "name": scale.name,
            "kind": "percentile",
            "provenance": scale.provenance,
            "anchors": [[s, p] for s, p in scale.anchors],
        }
    return {
        "name": scale.name,
        "kind": "bands",
        "provenance": scale.provenance,
        "bands": [{"label": b.label, "lower": b.lower, "upper": b.upper} for b in scale.bands],
    }


def score_frequency(scores) -> dict:
    """Counts of each distinct score value, sorted ascending."""
    values, counts = np.unique(np.asarray(list(scores), dtype=float), return_counts=True)
    return {"values": [float(v) for v in values], "counts": [int(c) for c in counts]}


def posterior_marginal_series(grid: PosteriorGrid) -> dict:
    """Marginal posterior of mu as a density series (mass / grid step)."""
    h = float(grid.mu_axis[1] - grid.mu_axis[0])
    return {
        "mu": [float(m) for m in grid.mu_axis],
        "density": [float(d) for d in grid.mu_marginal / h],
    }


def build_payload(result: AnalysisResult, seed: int, level: float,
                  scales: tuple[LabelScale, ...],
                  reported_method: Method | None = None,
                  extra_warnings: tuple[str, ...] = ()) -> dict:
    """Assemble the versioned analysis payload.

    ``reported_method`` overrides the rule-based selection when the caller
    explicitly requested one method; the decision-rule recommendation stays
    visible in the plan and a warning records the mismatch.
    """
    warnings = list(result.warnings) + list(extra_warnings)
    reported = reported_method or result.selected
    if reported not in result.intervals:
        raise ValueError(f"method {reported.value!r} was not computed for this study")
    if reported_method is not None and reported_method not in result.plan.recommended:
        warnings.append(
            f"method '{reported.value}' is not recommended for n={result.study.n} "
            f"studies (decision rule {result.plan.rule_fired.value})"
        )

    labels = (result.labels if reported == result.selected
              else {s.name: map_to_labels(result.intervals[reported], s) for s in scales})

    study = result.study
    payload = {
        "schema_version": SCHEMA_VERSION,
        "seed": int(seed),
        "level": float(level),
        "study": {
            "n": study.n,
            "mean": float(study.mean),
            "sd": None if study.sd is None else float(study.sd),
            "skewness": None if study.skewness is None else float(study.skewness),
            "scores": [float(s) for s in study.scores],
            "flags": list(study.flags),
        },
        "plan": {
            "rule_fired": result.plan.rule_fired.value,
            "recommended": [m.value for m in result.plan.recommended],
            "rationale": result.plan.rationale,
            "caveats": list(result.plan.caveats),
        },
        "selected": reported.value,
        "interval_kind": "credible" if reported == Method.BAYES else "confidence",
        "intervals": [
            _interval_entry(m, iv, m in result.plan.recommended, m == reported)
            for m, iv in result.intervals.items()
        ],
        "labels": {name: _label_entry(span) for name, span in labels.items()},
        "plots": {
            "score_frequency": score_frequency(study.scores),
            "interval_bands": {
                "scales": [_scale_entry(s) for s in scales],
                "selected": {
                    "method": reported.value,
                    "lower": float(result.intervals[reported].lower),
                    "upper": float(result.intervals[reported].upper),
                },
                "mean": float(study.mean),
            },
            "posterior_marginal": (
                posterior_marginal_series(result.posterior) if result.posterior is not None else None
            ),
        },
        "warnings": warnings,
    }
    return payload
