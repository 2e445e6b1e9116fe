"""Relative distances |x - y| / M(|x|, |y|), their domain-sensitive cousins,
and a numerical engine that classifies which of them are metrics."""

from .errors import (
    ConfigError,
    DegenerateWeightError,
    EvaluationError,
    InvalidDomainError,
    InvalidParameterError,
    OutsideDomainError,
    QuadratureError,
    RelMetricsError,
)
from .means import (
    ConstantWeight,
    CustomWeight,
    MaxMean,
    MinMean,
    PowerMeanPower,
    ProductWeight,
    ScaledPowerMean,
    WeightFunction,
    logarithmic_mean,
    power_mean,
    stolarsky_mean,
    stolarsky_quasimean,
    stolarsky_weight,
    trace,
    weight_eval,
)
from .metrics import (
    INFINITY,
    MetricKind,
    PointAtInfinity,
    as_point,
    chordal,
    example_metric,
    is_infinite,
    lambda_apc,
    rho,
    rho_pq,
    transform,
)
from .domains import (
    DomainSpec,
    HalfPlane,
    PuncturedSpace,
    SampledBoundary,
    UnitBall,
    boundary_distance,
    c_constant,
    cross_ratio,
    delta_p,
    iota,
    j_metric,
    load_domain_spec,
    parse_domain_spec,
    rho_double_prime,
    rho_prime,
    rho_sup,
    rho_tilde_halfplane,
)
from .verify import (
    FF_SUITE,
    ConvexityWitness,
    MIWitness,
    OrderReport,
    PlemReport,
    RatioDecrease,
    RegionCell,
    RegionTable,
    SearchConfig,
    ViolationReport,
    classify_pq_region,
    convexity_check,
    lambda_sharpness,
    mi_check,
    plem_conditions,
    pq_frontier_distance,
    pq_is_metric,
    pq_threshold,
    strong_order_check,
    triangle_search_1d,
    triangle_search_nd,
    triangle_search_transformed,
)

__version__ = "0.1.0"
