"""Confidence-interval constructors for mean SUS scores.

Covers the classical z and t intervals, a truncation-adjusted t interval
that restores nominal coverage when a bound exits [0, 100], and the
bootstrap family: percentile, BCa, and BCa with widened (expanded)
percentile positions for small samples. Bootstrap bounds are order
statistics of resample means, so they can never leave the observed score
range.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .distributions import normal_cdf, normal_quantile, t_cdf, t_quantile
from .rng import substream
from .scoring import Study

__all__ = [
    "Method",
    "Diagnostics",
    "Interval",
    "BootstrapConfig",
    "SCORE_BOUNDS",
    "z_interval",
    "t_interval",
    "truncation_adjusted_t_interval",
    "percentile_bootstrap",
    "bca_interval",
    "expanded_bca_interval",
    "bca_alpha_adjust",
    "jackknife_acceleration",
    "expansion_quantile",
    "interval_diagnostics",
]

SCORE_BOUNDS = (0.0, 100.0)

MIN_RECOMMENDED_RESAMPLES = 1000


class Method(str, enum.Enum):
    Z = "z"
    T = "t"
    TRUNC_ADJUSTED_T = "adjusted-t"
    PERCENTILE = "percentile"
    BCA = "bca"
    EXPANDED_BCA = "expanded-bca"
    BAYES = "bayes"


@dataclass(frozen=True)
class Diagnostics:
    violates_lower: bool
    violates_upper: bool
    width: float
    degenerate: bool


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    level: float
    method: Method
    diagnostics: Diagnostics
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class BootstrapConfig:
    """Resampling controls: resample count, seed, and percentile widening."""

    n_resamples: int = 10_000
    seed: int = 0
    expansion: bool = False

    def __post_init__(self) -> None:
        if self.n_resamples < 1:
            raise ValueError(f"n_resamples must be positive, got {self.n_resamples}")


def _diagnose(lower: float, upper: float, bounds: tuple[float, float]) -> Diagnostics:
    return Diagnostics(
        violates_lower=bool(lower < bounds[0]),
        violates_upper=bool(upper > bounds[1]),
        width=upper - lower,
        degenerate=bool(upper == lower),
    )


def interval_diagnostics(interval: Interval, bounds: tuple[float, float] = SCORE_BOUNDS) -> Diagnostics:
    """Recompute violation/width/degeneracy flags against the given bounds."""
    return _diagnose(interval.lower, interval.upper, bounds)


def _build(lower: float, upper: float, level: float, method: Method,
           bounds: tuple[float, float] = SCORE_BOUNDS, warnings: tuple[str, ...] = ()) -> Interval:
    lower, upper = float(lower), float(upper)
    return Interval(lower, upper, level, method, _diagnose(lower, upper, bounds), warnings)


def _check_level(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must be strictly inside (0, 1), got {level}")
    return level


def _require_sd(study: Study) -> float:
    if study.n < 2 or study.sd is None:
        raise ValueError(f"interval needs at least 2 scores, got n={study.n}")
    return study.sd


def z_interval(study: Study, level: float = 0.95) -> Interval:
    """Normal-theory interval: mean +/- z * sd / sqrt(n)."""
    sd = _require_sd(study)
    _check_level(level)
    half = normal_quantile(1.0 - (1.0 - level) / 2.0) * sd / math.sqrt(study.n)
    return _build(study.mean - half, study.mean + half, level, Method.Z)


def t_interval(study: Study, level: float = 0.95) -> Interval:
    """Student-t interval: mean +/- t_{alpha/2, n-1} * sd / sqrt(n)."""
    sd = _require_sd(study)
    _check_level(level)
    half = t_quantile(1.0 - (1.0 - level) / 2.0, study.n - 1) * sd / math.sqrt(study.n)
    return _build(study.mean - half, study.mean + half, level, Method.T)


def truncation_adjusted_t_interval(study: Study, level: float = 0.95,
                                   bounds: tuple[float, float] = SCORE_BOUNDS) -> Interval:
    """t interval with a bound pinned to the parameter space when violated.

    If the plain t interval exceeds a bound, the exceeded side is set to the
    bound and the other side is shifted outward so the interval still holds
    the full nominal t-probability; simply clipping would silently discard
    the mass outside the bound and under-cover. When not even [lo, hi] can
    hold the nominal mass, the whole parameter space is returned with a
    warning.
    """
    plain = t_interval(study, level)
    lo, hi = bounds
    if plain.diagnostics.degenerate:
        return replace(plain, method=Method.TRUNC_ADJUSTED_T)
    violates_lower, violates_upper = plain.diagnostics.violates_lower, plain.diagnostics.violates_upper
    if not (violates_lower or violates_upper):
        return _build(plain.lower, plain.upper, level, Method.TRUNC_ADJUSTED_T, bounds)
    unattainable = (
        f"no interval inside [{lo:g}, {hi:g}] holds probability {level:g}; "
        "reporting the full parameter space"
    )
    if violates_lower and violates_upper:
        return _build(lo, hi, level, Method.TRUNC_ADJUSTED_T, bounds, (unattainable,))
    df = study.n - 1
    se = study.sd / math.sqrt(study.n)
    if violates_upper:
        target = t_cdf((hi - study.mean) / se, df) - level
        if target <= 0.0:
            return _build(lo, hi, level, Method.TRUNC_ADJUSTED_T, bounds, (unattainable,))
        lower = study.mean + se * t_quantile(target, df)
        if lower < lo:
            return _build(lo, hi, level, Method.TRUNC_ADJUSTED_T, bounds, (unattainable,))
        return _build(lower, hi, level, Method.TRUNC_ADJUSTED_T, bounds)
    target = t_cdf((lo - study.mean) / se, df) + level
    if target >= 1.0:
        return _build(lo, hi, level, Method.TRUNC_ADJUSTED_T, bounds, (unattainable,))
    upper = study.mean + se * t_quantile(target, df)
    if upper > hi:
        return _build(lo, hi, level, Method.TRUNC_ADJUSTED_T, bounds, (unattainable,))
    return _build(lo, upper, level, Method.TRUNC_ADJUSTED_T, bounds)


def _resample_means(scores: np.ndarray, cfg: BootstrapConfig) -> np.ndarray:
    """Sorted means of cfg.n_resamples with-replacement resamples."""
    rng = substream(cfg.seed)
    idx = rng.integers(0, scores.size, size=(cfg.n_resamples, scores.size))
    means = scores[idx].mean(axis=1)
    means.sort()
    return means


def _order_statistic(sorted_means: np.ndarray, p: float) -> float:
    # ceil(p*B) with 1-based indexing, clamped; the round() guards against
    # float dust like 0.025*1e5 -> 2500.0000000000005.
    b = sorted_means.size
    k = math.ceil(round(p * b, 9))
    return float(sorted_means[min(max(k, 1), b) - 1])


def _small_b_warning(cfg: BootstrapConfig) -> tuple[str, ...]:
    if cfg.n_resamples < MIN_RECOMMENDED_RESAMPLES:
        return (f"bootstrap resample count {cfg.n_resamples} is below "
                f"{MIN_RECOMMENDED_RESAMPLES}; bounds may be unstable",)
    return ()


def _as_scores(scores) -> np.ndarray:
    xs = np.asarray(list(scores) if not isinstance(scores, np.ndarray) else scores, dtype=float)
    if xs.size < 2:
        raise ValueError(f"bootstrap needs at least 2 scores, got {xs.size}")
    if not np.all(np.isfinite(xs)):
        raise ValueError("scores must be finite")
    return xs


def percentile_bootstrap(scores, level: float = 0.95,
                         cfg: BootstrapConfig = BootstrapConfig()) -> Interval:
    """Percentile bootstrap interval for the mean.

    Bounds are the ceil(alpha/2 * B) and ceil((1-alpha/2) * B) order
    statistics of the resample means (widened tails when cfg.expansion is
    set), hence always inside [min(scores), max(scores)].
    """
    xs = _as_scores(scores)
    _check_level(level)
    warnings = _small_b_warning(cfg)
    means = _resample_means(xs, cfg)
    alpha_half = expansion_quantile(level, xs.size) if cfg.expansion else (1.0 - level) / 2.0
    lower = _order_statistic(means, alpha_half)
    upper = _order_statistic(means, 1.0 - alpha_half)
    return _build(lower, upper, level, Method.PERCENTILE, warnings=warnings)


def jackknife_acceleration(scores) -> float:
    """Acceleration factor from the n leave-one-out means.

    a = sum(d_i^3) / (6 * sum(d_i^2)^1.5) with d_i the deviations of the
    jackknife means from their average; it estimates the skewness term that
    the plain percentile method ignores.
    """
    xs = np.asarray(list(scores) if not isinstance(scores, np.ndarray) else scores, dtype=float)
    if xs.size < 3:
        raise ValueError(f"jackknife needs at least 3 scores, got {xs.size}")
    loo_means = (xs.sum() - xs) / (xs.size - 1)
    d = loo_means.mean() - loo_means
    denom = float(np.sum(d * d))
    if denom == 0.0:
        raise ValueError("acceleration is undefined for zero-variance data")
    return float(np.sum(d**3)) / (6.0 * denom**1.5)


def expansion_quantile(level: float, n: int) -> float:
    """Widened tail probability alpha'/2 = Phi(-sqrt(n/(n-1)) * t_{alpha/2,n-1})."""
    _check_level(level)
    if n < 2:
        raise ValueError(f"expansion needs n >= 2, got {n}")
    t_crit = t_quantile(1.0 - (1.0 - level) / 2.0, n - 1)
    return normal_cdf(-math.sqrt(n / (n - 1.0)) * t_crit)


def bca_alpha_adjust(b: float, a: float, alpha_half: float) -> tuple[float, float]:
    """Efron's bias/acceleration-adjusted percentile positions.

    alpha_1 = Phi(b + (b + z_{alpha/2}) / (1 - a(b + z_{alpha/2}))) and the
    mirror image for alpha_2. Reduces to (alpha/2, 1 - alpha/2) when
    b = a = 0.
    """
    if not 0.0 < alpha_half < 0.5:
        raise ValueError(f"alpha_half must be in (0, 0.5), got {alpha_half}")
    out = []
    for z in (normal_quantile(alpha_half), normal_quantile(1.0 - alpha_half)):
        denom = 1.0 - a * (b + z)
        if abs(denom) < 1e-9:
            raise ValueError(
                f"degenerate acceleration: 1 - a*(b+z) = {denom:g} at z = {z:g}"
            )
        out.append(normal_cdf(b + (b + z) / denom))
    return out[0], out[1]


def _bca(scores, level: float, cfg: BootstrapConfig, expanded: bool) -> Interval:
    xs = _as_scores(scores)
    _check_level(level)
    if xs.size < 3:
        raise ValueError(f"BCa needs at least 3 scores, got {xs.size}")
    method = Method.EXPANDED_BCA if expanded else Method.BCA
    warnings = _small_b_warning(cfg)
    means = _resample_means(xs, cfg)
    if means[0] == means[-1]:
        return _build(means[0], means[0], level, method,
                      warnings=warnings + ("all resample means identical",))
    p = float(np.count_nonzero(means < xs.mean())) / means.size
    alpha_half = expansion_quantile(level, xs.size) if expanded else (1.0 - level) / 2.0
    if p <= 0.0 or p >= 1.0:
        # Bias factor Phi^-1(p) is undefined; report plain percentile bounds.
        warnings = warnings + (
            f"bias proportion {p:g} leaves the bias factor undefined; "
            "falling back to percentile bounds",
        )
        lower = _order_statistic(means, alpha_half)
        upper = _order_statistic(means, 1.0 - alpha_half)
        return _build(lower, upper, level, method, warnings=warnings)
    b = normal_quantile(p)
    a = jackknife_acceleration(xs)
    alpha1, alpha2 = bca_alpha_adjust(b, a, alpha_half)
    lower = _order_statistic(means, alpha1)
    upper = _order_statistic(means, alpha2)
    return _build(lower, upper, level, method, warnings=warnings)


def bca_interval(scores, level: float = 0.95, cfg: BootstrapConfig = BootstrapConfig()) -> Interval:
    """Bias-corrected and accelerated bootstrap interval for the mean."""
    return _bca(scores, level, cfg, expanded=False)


def expanded_bca_interval(scores, level: float = 0.95,
                          cfg: BootstrapConfig = BootstrapConfig()) -> Interval:
    """BCa interval with small-sample widened percentile positions."""
    return _bca(scores, level, cfg, expanded=True)
