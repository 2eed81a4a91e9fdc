"""SUS study scoring with defensible small-sample uncertainty intervals."""

from .bayes import PosteriorGrid, PriorSpec, credible_interval, posterior_grid, posterior_mean
from .decision import (
    AnalysisResult,
    Band,
    LabelScale,
    LabelSpan,
    MethodPlan,
    Rule,
    builtin_scales,
    load_scales,
    map_to_labels,
    recommend,
    select_interval,
)
from .distributions import (
    SkewNormalParams,
    TruncatedNormalParams,
    edgeworth_density,
    normal_cdf,
    normal_quantile,
    sample_skewness,
    skew_normal_from_moments,
    skew_normal_moments,
    skew_normal_sample,
    t_cdf,
    t_quantile,
    truncated_normal_quantile,
)
from .intervals import (
    BootstrapConfig,
    Diagnostics,
    Interval,
    Method,
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
from .scoring import (
    ResponseSheet,
    Study,
    enumerate_feasible_means,
    feasible_mean_counts,
    item_score,
    study_summary,
    sus_score,
)
from .simulation import (
    CellResult,
    SimConfig,
    generate_study,
    run_coverage_experiment,
    run_rule3_validation,
    run_upper_bound_experiment,
    sample_mean_distribution,
)

__version__ = "0.1.0"
