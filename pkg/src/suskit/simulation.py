"""Monte Carlo experiments: coverage, widths, bound violations, decision-rule checks.

Scores are drawn from a skew-normal parent matched to configured moments,
optionally rejection-truncated at 100 and rounded onto the observable
[0, 100] grid in 2.5 steps. Every replication draws from a stream keyed by
(seed, n, skew, rep), so any parallel split over cells reproduces the serial
results exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .decision import _pick_rule3
from .distributions import (
    SkewNormalParams,
    sample_skewness,
    skew_normal_cdf,
    skew_normal_from_moments,
    skew_normal_pdf,
    skew_normal_sample,
)
from .intervals import BootstrapConfig, Interval, Method, expanded_bca_interval, t_interval
from .rng import derive_seed, float_key, substream
from .scoring import study_summary

__all__ = [
    "SimConfig",
    "MethodCellStats",
    "CellResult",
    "SampleMeanDistribution",
    "Rule3Summary",
    "UpperBoundSummary",
    "generate_study",
    "true_score_mean",
    "truncated_moments",
    "pre_truncation_mean_for",
    "sample_mean_distribution",
    "run_coverage_experiment",
    "run_rule3_validation",
    "run_upper_bound_experiment",
]

SCORE_GRID_STEP = 2.5
UPPER_BOUND = 100.0

DEFAULT_SKEW_GRID = tuple(np.round(np.linspace(-0.99, 0.99, 13), 6))


@dataclass(frozen=True)
class SimConfig:
    """Shared experiment configuration; see README for the JSON schema."""

    mean: float = 68.0
    sd: float = 20.0
    skew_grid: tuple[float, ...] = DEFAULT_SKEW_GRID
    n_grid: tuple[int, ...] = (4, 5, 6, 7, 8, 9, 10)
    reps: int = 500
    level: float = 0.95
    truncate_at_100: bool = False
    round_to_grid: bool = False
    seed: int = 0
    bootstrap_b: int = 2000
    workers: int = 1

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError(f"reps must be at least 1, got {self.reps}")
        object.__setattr__(self, "skew_grid", tuple(float(s) for s in self.skew_grid))
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))

    @classmethod
    def from_dict(cls, raw: dict) -> "SimConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown simulation config keys: {sorted(unknown)}")
        return cls(**raw)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "sd": self.sd,
            "skew_grid": list(self.skew_grid),
            "n_grid": list(self.n_grid),
            "reps": self.reps,
            "level": self.level,
            "truncate_at_100": self.truncate_at_100,
            "round_to_grid": self.round_to_grid,
            "seed": self.seed,
            "bootstrap_b": self.bootstrap_b,
            "workers": self.workers,
        }


def _parent(cfg: SimConfig, skew: float) -> SkewNormalParams:
    return skew_normal_from_moments(cfg.mean, cfg.sd, skew)


def generate_study(cfg: SimConfig, n: int, skew: float, rng: np.random.Generator) -> np.ndarray:
    """Draw one study of n scores from the configured parent."""
    params = _parent(cfg, skew)
    if cfg.truncate_at_100:
        acceptance = float(skew_normal_cdf(UPPER_BOUND, params))
        if acceptance < 0.01:
            raise ValueError(
                f"rejection acceptance {acceptance:.4f} below 1%; "
                "the parent puts almost all mass above 100"
            )
    xs = skew_normal_sample(params, n, rng)
    if cfg.truncate_at_100:
        for _ in range(1000):
            mask = xs > UPPER_BOUND
            if not mask.any():
                break
            xs[mask] = skew_normal_sample(params, int(mask.sum()), rng)
        else:  # pragma: no cover - guarded by the acceptance check
            raise ValueError("rejection sampling failed to converge")
    if cfg.round_to_grid:
        xs = np.clip(np.round(xs / SCORE_GRID_STEP) * SCORE_GRID_STEP, 0.0, UPPER_BOUND)
    return xs


def truncated_moments(params: SkewNormalParams, upper: float = UPPER_BOUND) -> tuple[float, float, float]:
    """(mean, sd, skewness) of the skew-normal restricted to x <= upper, by quadrature."""
    total = float(skew_normal_cdf(upper, params))

    def moment(k: int) -> float:
        val, _ = integrate.quad(
            lambda x: x**k * skew_normal_pdf(x, params), -np.inf, upper, limit=200
        )
        return val / total

    m1 = moment(1)
    m2 = moment(2)
    m3 = moment(3)
    var = m2 - m1 * m1
    mu3 = m3 - 3 * m1 * var - m1**3
    return m1, math.sqrt(var), mu3 / var**1.5


def pre_truncation_mean_for(target_mean: float, sd: float, skew: float,
                            upper: float = UPPER_BOUND) -> float:
    """Pre-truncation mean whose upper-truncated distribution has the target mean."""

    def post_mean(m: float) -> float:
        return truncated_moments(skew_normal_from_moments(m, sd, skew), upper)[0]

    lo, hi = target_mean, target_mean + 4.0 * sd
    if post_mean(lo) > target_mean or post_mean(hi) < target_mean:
        raise ValueError(f"target mean {target_mean} not bracketed for sd={sd}, skew={skew}")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if post_mean(mid) < target_mean:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def true_score_mean(cfg: SimConfig, skew: float) -> float:
    """Exact population mean of the post-processed score distribution.

    This is the target the coverage experiments test against: rejection
    truncation and grid rounding both shift the mean away from cfg.mean, and
    the shift is computed here analytically rather than estimated.
    """
    params = _parent(cfg, skew)
    if not cfg.truncate_at_100 and not cfg.round_to_grid:
        return cfg.mean
    total = float(skew_normal_cdf(UPPER_BOUND, params)) if cfg.truncate_at_100 else 1.0
    if not cfg.round_to_grid:
        val, _ = integrate.quad(
            lambda x: x * skew_normal_pdf(x, params), -np.inf, UPPER_BOUND, limit=200
        )
        return val / total

    def cdf(x: float) -> float:
        c = float(skew_normal_cdf(x, params))
        return min(c, total) / total

    # Rounding maps cell (g - 1.25, g + 1.25] onto grid point g, with the end
    # cells absorbing the clamped tails.
    mean = 0.0
    grid = np.arange(0.0, UPPER_BOUND + SCORE_GRID_STEP / 2, SCORE_GRID_STEP)
    for g in grid:
        lo_edge = -np.inf if g == 0.0 else g - SCORE_GRID_STEP / 2
        hi_edge = np.inf if g == UPPER_BOUND else g + SCORE_GRID_STEP / 2
        p_lo = 0.0 if lo_edge == -np.inf else cdf(lo_edge)
        p_hi = 1.0 if hi_edge == np.inf else cdf(hi_edge)
        mean += g * (p_hi - p_lo)
    return mean


@dataclass(frozen=True)
class SampleMeanDistribution:
    skewness_of_means: float
    bin_edges: np.ndarray
    density: np.ndarray
    mean_of_means: float


def sample_mean_distribution(cfg: SimConfig, n: int, skew: float,
                             bins: int = 120) -> SampleMeanDistribution:
    """Distribution of the sample mean over cfg.reps simulated studies."""
    rng = substream(cfg.seed, n, float_key(skew))
    params = _parent(cfg, skew)
    xs = skew_normal_sample(params, cfg.reps * n, rng)
    if cfg.truncate_at_100:
        acceptance = float(skew_normal_cdf(UPPER_BOUND, params))
        if acceptance < 0.01:
            raise ValueError(f"rejection acceptance {acceptance:.4f} below 1%")
        for _ in range(1000):
            mask = xs > UPPER_BOUND
            if not mask.any():
                break
            xs[mask] = skew_normal_sample(params, int(mask.sum()), rng)
    if cfg.round_to_grid:
        xs = np.clip(np.round(xs / SCORE_GRID_STEP) * SCORE_GRID_STEP, 0.0, UPPER_BOUND)
    means = xs.reshape(cfg.reps, n).mean(axis=1)
    density, edges = np.histogram(means, bins=bins, range=(0.0, UPPER_BOUND), density=True)
    return SampleMeanDistribution(
        skewness_of_means=sample_skewness(means),
        bin_edges=edges,
        density=density,
        mean_of_means=float(means.mean()),
    )


@dataclass(frozen=True)
class MethodCellStats:
    coverage: float
    coverage_se: float
    mean_width: float
    violation_rate: float
    violation_se: float


@dataclass(frozen=True)
class CellResult:
    n: int
    skew: float
    true_mean: float
    t: MethodCellStats
    expanded_bca: MethodCellStats
    width_ratio_bca_over_t: float


def _rep_intervals(cfg: SimConfig, n: int, skew: float, rep: int) -> tuple[Interval, Interval]:
    rng = substream(cfg.seed, n, float_key(skew), rep, 0)
    scores = generate_study(cfg, n, skew, rng)
    study = study_summary(scores)
    boot_cfg = BootstrapConfig(cfg.bootstrap_b, derive_seed(cfg.seed, n, float_key(skew), rep, 1))
    return t_interval(study, cfg.level), expanded_bca_interval(scores, cfg.level, boot_cfg)


def _violates(iv: Interval) -> bool:
    return iv.diagnostics.violates_lower or iv.diagnostics.violates_upper


def _proportion_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def _coverage_cell(args: tuple[SimConfig, int, float]) -> CellResult:
    cfg, n, skew = args
    truth = true_score_mean(cfg, skew)
    cover = {"t": 0, "bca": 0}
    viol = {"t": 0, "bca": 0}
    width = {"t": 0.0, "bca": 0.0}
    for rep in range(cfg.reps):
        t_iv, bca_iv = _rep_intervals(cfg, n, skew, rep)
        for key, iv in (("t", t_iv), ("bca", bca_iv)):
            cover[key] += iv.lower <= truth <= iv.upper
            viol[key] += _violates(iv)
            width[key] += iv.diagnostics.width
    stats = {}
    for key in ("t", "bca"):
        cov = cover[key] / cfg.reps
        vr = viol[key] / cfg.reps
        stats[key] = MethodCellStats(
            coverage=cov,
            coverage_se=_proportion_se(cov, cfg.reps),
            mean_width=width[key] / cfg.reps,
            violation_rate=vr,
            violation_se=_proportion_se(vr, cfg.reps),
        )
    ratio = stats["bca"].mean_width / stats["t"].mean_width if stats["t"].mean_width > 0 else math.nan
    return CellResult(n, skew, truth, stats["t"], stats["bca"], ratio)


def _map_cells(cfg: SimConfig, worker, cells):
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(worker, cells))
    return [worker(c) for c in cells]


def run_coverage_experiment(cfg: SimConfig) -> list[CellResult]:
    """Coverage, width, and bound-violation rates per (n, skew) cell and method."""
    cells = [(cfg, n, skew) for n in cfg.n_grid for skew in cfg.skew_grid]
    return _map_cells(cfg, _coverage_cell, cells)


@dataclass(frozen=True)
class Rule3CellResult:
    n: int
    skew: float
    coverage: float
    coverage_se: float


@dataclass(frozen=True)
class Rule3Summary:
    min_coverage: float
    mean_coverage: float
    max_coverage: float
    cells: tuple[Rule3CellResult, ...]


def _rule3_cell(args: tuple[SimConfig, int, float]) -> Rule3CellResult:
    cfg, n, skew = args
    truth = true_score_mean(cfg, skew)
    covered = 0
    for rep in range(cfg.reps):
        t_iv, bca_iv = _rep_intervals(cfg, n, skew, rep)
        chosen = t_iv if _pick_rule3(t_iv, bca_iv) is Method.T else bca_iv
        covered += chosen.lower <= truth <= chosen.upper
    cov = covered / cfg.reps
    return Rule3CellResult(n, skew, cov, _proportion_se(cov, cfg.reps))


def run_rule3_validation(cfg: SimConfig) -> Rule3Summary:
    """Coverage of the rule-3 selected interval over an n >= 9 grid."""
    if any(n < 9 for n in cfg.n_grid):
        raise ValueError(f"rule-3 validation needs n >= 9 everywhere, got {cfg.n_grid}")
    cells = _map_cells(cfg, _rule3_cell,
                       [(cfg, n, skew) for n in cfg.n_grid for skew in cfg.skew_grid])
    coverages = [c.coverage for c in cells]
    return Rule3Summary(min(coverages), float(np.mean(coverages)), max(coverages), tuple(cells))


@dataclass(frozen=True)
class UpperBoundCellResult:
    n: int
    skew: float
    t_contains_threshold: float
    t_se: float
    bca_contains_threshold: float
    bca_se: float


@dataclass(frozen=True)
class UpperBoundSummary:
    threshold: float
    t_contains: float
    bca_contains: float
    bca_fewer_errors_fraction: float
    cells: tuple[UpperBoundCellResult, ...]


def _upper_bound_cell(args: tuple[SimConfig, int, float, float]) -> UpperBoundCellResult:
    cfg, n, skew, threshold = args
    t_hits = 0
    bca_hits = 0
    for rep in range(cfg.reps):
        t_iv, bca_iv = _rep_intervals(cfg, n, skew, rep)
        t_hits += t_iv.upper >= threshold
        bca_hits += bca_iv.upper >= threshold
    t_p, bca_p = t_hits / cfg.reps, bca_hits / cfg.reps
    return UpperBoundCellResult(n, skew, t_p, _proportion_se(t_p, cfg.reps),
                                bca_p, _proportion_se(bca_p, cfg.reps))


def run_upper_bound_experiment(cfg: SimConfig, threshold: float = 70.0) -> UpperBoundSummary:
    """How often interval upper bounds reach the acceptability threshold.

    Intended for a true mean well below the threshold, where reaching it
    means reporting an unacceptable system as possibly acceptable.
    """
    cells = _map_cells(
        cfg, _upper_bound_cell,
        [(cfg, n, skew, threshold) for n in cfg.n_grid for skew in cfg.skew_grid],
    )
    t_pooled = float(np.mean([c.t_contains_threshold for c in cells]))
    bca_pooled = float(np.mean([c.bca_contains_threshold for c in cells]))
    fewer = float(np.mean([c.bca_contains_threshold < c.t_contains_threshold for c in cells]))
    return UpperBoundSummary(threshold, t_pooled, bca_pooled, fewer, tuple(cells))
