"""Geometric complexity of unitary evolutions and dilated quantum channels.

The package computes the closed-form Hilbert-Schmidt complexity of
unitary evolutions, the subtractive complexity and noise complexity of
channels realized by Stinespring dilations, intrinsic values by
constrained minimization over admissible dilations, dissipator-controlled
growth bounds in the Markovian regime, and coherence-based lower bounds,
together with a property-test suite and a CSV/SVG reporting CLI.
"""

__version__ = "0.1.0"

from .coherence import (
    CoherenceReport,
    GrowthReport,
    coherence,
    coherence_growth_check,
    coherence_value,
    dephase,
    lower_bound_appendix,
    lower_bound_main,
    main_bound_verifier,
)
from .complexity import (
    ChannelComplexityReport,
    PostulateReport,
    channel_complexity,
    env_surrogate,
    noise_complexity,
    postulate_check,
    surrogate_norm_check,
    surrogate_path_cost,
)
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .dilations import (
    ChoiMatrix,
    Dilation,
    KrausSet,
    channel_apply,
    channel_distance,
    choi_matrix,
    gauge_transform,
    kraus_from_dilation,
    total_unitary,
    trivial_dilation,
)
from .errors import (
    DimensionMismatchError,
    GqcError,
    InfeasibleError,
    IntegrationError,
    ProblemFormatError,
    ValidationError,
)
from .geometry import (
    GeodesicPath,
    HamiltonianPath,
    PenaltyMetric,
    euler_arnold_geodesic,
    hs_complexity_static,
    locality_penalty_metric,
    omega_norm,
    path_length,
    uniform_penalty_metric,
)
from .gksl import (
    BenchmarkSpec,
    GkslGenerator,
    StandardDilationSpec,
    benchmark_bounds_table,
    benchmark_channel,
    coarse_intrinsic_bound,
    default_bath_spec,
    dissipator_scale,
    growth_bound,
    gksl_apply,
    liouvillian,
    semigroup_evolve,
    standard_dilation,
)
from .intrinsic import (
    AdmissibleConstraints,
    DilationParameterization,
    OptimizationResult,
    OptimizerOptions,
    admissible_check,
    intrinsic_complexity,
    intrinsic_noise,
)
from .operators import (
    eig_hermitian,
    hs_inner,
    hs_norm,
    matrix_abs,
    matrix_fn,
    matrix_sqrt,
    partial_trace_env,
    tensor,
    unitary_evolve,
)
from .problems import ProblemSpec, load_problem
from .reports import ReportTable, emit_report
from .verify import run_suites
