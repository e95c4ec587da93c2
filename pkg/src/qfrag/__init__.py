"""Exact and asymptotic bipartite entanglement measures for strongly
symmetric mixed states of Temperley-Lieb / SU(2) chains, plus a dense
brute-force oracle that validates every closed form at desk scale."""

from .algebra import (
    Bipartition,
    CommutantSpec,
    SectorRow,
    SectorTable,
    krylov_dim,
    q_from_n,
    qdim,
    sector_table,
)
from .asymptotics import (
    AsymptoticEstimate,
    ConsistencyError,
    TruncatedMeasures,
    a_epsilon,
    e_greater_asymp,
    e_less_asymp,
    e_su2_asymp,
    equal_bipartition,
    estimate,
    gaussian_tail,
    lambda_max,
    lambda_star,
    log_sector_weights,
    log_space_measures,
    log_space_truncated_measures,
    p_lambda_asymp,
    scaling_length,
)
from .measures import (
    EnsembleState,
    MeasureReport,
    Truncation,
    custom_state,
    e_greater,
    e_less,
    measure_report,
    mmis,
    trace_distance_truncated,
    truncate,
)
from .oracle import (
    CheckResult,
    KrylovBasis,
    MemoryCapExceeded,
    VerificationError,
    binegativity_check,
    entanglement_entropy,
    krylov_subspace,
    log_negativity_dense,
    mmis_dense,
    negativity_spectrum_check,
    partial_transpose,
    predicted_negativity_spectrum,
    tl_generator,
    tl_relation_check,
    trace_norm,
    truncated_mmis_dense,
)

__version__ = "0.1.0"
