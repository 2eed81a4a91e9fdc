"""Distribution and moment functions shared by the interval constructors.

Normal and Student-t CDF/quantile pairs are delegated to scipy.special's
Cephes routines, which comfortably meet the accuracy this package needs in
the far tails (the widened bootstrap percentiles go below 1e-70 at n=2).
The skew-normal and truncated-normal helpers are implemented directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "MAX_SKEW_NORMAL_SKEWNESS",
    "SkewNormalParams",
    "TruncatedNormalParams",
    "normal_cdf",
    "normal_pdf",
    "normal_quantile",
    "t_cdf",
    "t_quantile",
    "sample_skewness",
    "skew_normal_from_moments",
    "skew_normal_moments",
    "skew_normal_pdf",
    "skew_normal_cdf",
    "skew_normal_sample",
    "truncated_normal_cdf",
    "truncated_normal_quantile",
    "edgeworth_density",
]

# Supremum of |skewness| over the skew-normal family, attained as the shape
# parameter tends to infinity. Kept slightly conservative so the +/-0.99
# simulation grid is strictly feasible.
MAX_SKEW_NORMAL_SKEWNESS = 0.9952719

_B = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class SkewNormalParams:
    """Location/scale/shape parametrization of the skew-normal family."""

    location: float
    scale: float
    shape: float

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class TruncatedNormalParams:
    """Normal(mean, sd) restricted and renormalized to [lower, upper]."""

    mean: float
    sd: float
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.sd > 0:
            raise ValueError(f"sd must be positive, got {self.sd}")
        if not self.lower < self.upper:
            raise ValueError(
                f"lower bound must be below upper bound, got [{self.lower}, {self.upper}]"
            )


def normal_cdf(x: float) -> float:
    """Standard normal CDF."""
    return float(special.ndtr(x))


def normal_pdf(x: float) -> float:
    """Standard normal density."""
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be strictly inside (0, 1), got {p}")
    return float(special.ndtri(p))


def _check_df(df: int) -> int:
    if df < 1 or int(df) != df:
        raise ValueError(f"degrees of freedom must be a positive integer, got {df}")
    return int(df)


def t_cdf(x: float, df: int) -> float:
    """Student-t CDF with df degrees of freedom."""
    return float(special.stdtr(_check_df(df), x))


def t_quantile(p: float, df: int) -> float:
    """Student-t quantile for p in (0, 1)."""
    df = _check_df(df)
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be strictly inside (0, 1), got {p}")
    return float(special.stdtrit(df, p))


def sample_skewness(xs) -> float:
    """Adjusted Fisher-Pearson skewness G1 = g1 * sqrt(n(n-1)) / (n-2).

    g1 is the moment ratio m3 / m2^(3/2) with moments over n. Requires
    n >= 3 and nonzero sample variance.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    if n < 3:
        raise ValueError(f"skewness needs at least 3 observations, got {n}")
    d = xs - xs.mean()
    m2 = float(np.mean(d * d))
    if m2 == 0.0:
        raise ValueError("skewness is undefined for zero-variance data")
    g1 = float(np.mean(d * d * d)) / m2**1.5
    return g1 * math.sqrt(n * (n - 1)) / (n - 2)


def _delta_from_skewness(skew: float) -> float:
    # Exact inversion of gamma1 = ((4-pi)/2) * (b*delta)^3 / (1 - b^2 delta^2)^(3/2)
    # via t = b*delta / sqrt(1 - b^2 delta^2):  gamma1 = ((4-pi)/2) t^3.
    t = math.copysign(abs(2.0 * skew / (4.0 - math.pi)) ** (1.0 / 3.0), skew)
    return t / math.sqrt(1.0 + t * t) / _B


def skew_normal_from_moments(mean: float, sd: float, skew: float) -> SkewNormalParams:
    """Skew-normal parameters whose population mean/sd/skewness match the inputs."""
    if not sd > 0:
        raise ValueError(f"sd must be positive, got {sd}")
    if abs(skew) >= MAX_SKEW_NORMAL_SKEWNESS:
        raise ValueError(
            f"skewness {skew} is unattainable for the skew-normal family "
            f"(|skewness| must be < {MAX_SKEW_NORMAL_SKEWNESS})"
        )
    delta = _delta_from_skewness(skew)
    scale = sd / math.sqrt(1.0 - _B * _B * delta * delta)
    location = mean - scale * _B * delta
    alpha = delta / math.sqrt(1.0 - delta * delta)
    params = SkewNormalParams(location, scale, alpha)
    # The inversion above is algebraically exact; polish with one Newton step
    # on delta only if floating-point residue ever exceeds tolerance.
    if abs(skew_normal_moments(params)[2] - skew) > 1e-10:  # pragma: no cover
        raise AssertionError("moment inversion residual above tolerance")
    return params


def skew_normal_moments(params: SkewNormalParams) -> tuple[float, float, float]:
    """Population (mean, sd, skewness) of a skew-normal distribution."""
    delta = params.shape / math.sqrt(1.0 + params.shape**2)
    bd = _B * delta
    mean = params.location + params.scale * bd
    var = params.scale**2 * (1.0 - bd * bd)
    skew = (4.0 - math.pi) / 2.0 * bd**3 / (1.0 - bd * bd) ** 1.5
    return mean, math.sqrt(var), skew


def skew_normal_pdf(x, params: SkewNormalParams):
    """Skew-normal density 2/scale * phi(z) * Phi(shape*z)."""
    z = (np.asarray(x, dtype=float) - params.location) / params.scale
    return 2.0 / params.scale * np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi) * special.ndtr(params.shape * z)


def skew_normal_cdf(x, params: SkewNormalParams):
    """Skew-normal CDF, Phi(z) - 2*OwensT(z, shape)."""
    z = (np.asarray(x, dtype=float) - params.location) / params.scale
    return special.ndtr(z) - 2.0 * special.owens_t(z, params.shape)


def skew_normal_sample(params: SkewNormalParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n variates using the delta representation.

    X = location + scale * (delta*|Z0| + sqrt(1-delta^2)*Z1) with Z0, Z1
    independent standard normals, so output is deterministic given the
    generator state.
    """
    if n < 1:
        raise ValueError(f"sample size must be at least 1, got {n}")
    delta = params.shape / math.sqrt(1.0 + params.shape**2)
    z0, z1 = rng.standard_normal((2, n))
    return params.location + params.scale * (delta * np.abs(z0) + math.sqrt(1.0 - delta * delta) * z1)


def truncated_normal_cdf(x, params: TruncatedNormalParams):
    """CDF of the truncated normal, 0 below lower and 1 above upper."""
    za = special.ndtr((params.lower - params.mean) / params.sd)
    zb = special.ndtr((params.upper - params.mean) / params.sd)
    z = special.ndtr((np.asarray(x, dtype=float) - params.mean) / params.sd)
    return np.clip((z - za) / (zb - za), 0.0, 1.0)


def truncated_normal_quantile(p: float, params: TruncatedNormalParams) -> float:
    """Quantile of the truncated normal; always lands inside [lower, upper]."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be strictly inside (0, 1), got {p}")
    za = special.ndtr((params.lower - params.mean) / params.sd)
    zb = special.ndtr((params.upper - params.mean) / params.sd)
    x = params.mean + params.sd * float(special.ndtri(za + p * (zb - za)))
    return min(max(x, params.lower), params.upper)


def edgeworth_density(x: float, n: int, lambda3: float) -> float:
    """First-order Edgeworth density of the studentized sample mean.

    phi(x) - (1/sqrt(n)) * (lambda3/6) * phi'''(x), with
    phi'''(x) = (3x - x^3) phi(x). Diagnostic only: the correction term can
    push the value negative far in the tails, and it is reported as-is.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    phi = normal_pdf(x)
    phi3 = (3.0 * x - x**3) * phi
    return phi - lambda3 / (6.0 * math.sqrt(n)) * phi3
