"""Numerical toolkit for nonlinear spectral gaps, average-distortion
snowflake embeddings, and dimension lower-bound certificates on finite
metric spaces."""

from .boost import BoostResult, boost_config, extrapolation_witness_check, solve_center
from .certificates import (
    Certificate,
    avg_distortion,
    dim_certificate,
    enflo_cube_check,
    enflo_lower,
    expander_avg_lower,
    general_target_lower,
    holder_constant,
)
from .embeddings import (
    DistortionSummary,
    EmbeddingMap,
    hilbert_realize_snowflake,
    line_embed,
    lower_exponent,
    measure_distortion,
    raise_exponent,
    sl_character_embed,
    snowflake_self_embed,
    transfer_snowflake,
)
from .errors import NumericalFailure, ValidationError
from .graphs import (
    CayleyGroup,
    Graph,
    bfs_metric,
    cayley_sl,
    complete,
    cycle,
    distance_moment,
    hypercube,
    random_regular,
)
from .kernels import (
    Spectrum,
    StochasticKernel,
    graph_kernel,
    jacobi_eigenvalues,
    lazy,
    power,
    second_eigenvector,
    spectrum,
    spectrum_jacobi,
)
from .metrics import (
    FiniteMetricSpace,
    NormedHost,
    PointConfig,
    ProbabilityWeights,
    complexification_norm,
    distance_matrix,
    frechet_embed,
    lp_host,
    norm_eval,
    real_line,
    snowflake,
)
from .normalization import (
    SandwichReport,
    eta,
    eta_minimizer,
    f_omega,
    f_omega_inverse,
    holder_sandwich_check,
    psi_omega,
)
from .rayleigh import (
    InequalityCheck,
    RayleighReport,
    absolute_rayleigh,
    gamma_euclidean_exact,
    gamma_lower_bound_search,
    markov_type_ratio,
    rayleigh_ratio,
    scalar_extrapolation_check,
    vector_extrapolation_bound,
)

__version__ = "0.1.0"
