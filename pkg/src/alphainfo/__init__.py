"""Renyi-order information measures, their conditional versions, and
success-rate ceilings for side-channel evaluation."""

from .prob import (
    Channel,
    InvalidDistributionError,
    Joint2,
    Joint3,
    Pmf,
    UndefinedConditionalError,
    compose,
    conditional_slice,
    load_distribution,
    marginal,
    save_distribution,
)
from .renyi import (
    SHANNON,
    LogBase,
    Order,
    alpha_cross_power,
    alpha_divergence,
    alpha_entropy,
    alpha_norm,
    arimoto_cond_entropy,
    binary_alpha_div,
    cond_alpha_divergence,
    sibson_info,
    sibson_qstar,
)
from .cond_info import (
    ComparisonReport,
    DefinitionTag,
    compare_definitions,
    cond_alpha_info,
    cond_info_000,
    cond_info_001,
    cond_info_010,
    cond_info_by_tag,
    cond_qstar,
    swap_xy,
)
from .fano import (
    GridQmin,
    QminResult,
    SuccessBound,
    ThresholdNotReachedError,
    fano_rhs,
    invert_success_bound,
    qmin_from_table,
    qmin_search,
)
from .sca import (
    AES_SBOX,
    SBOX_2BIT,
    SBOX_4BIT,
    BoundCurve,
    EmptyPosteriorError,
    EstimateResult,
    LeakageModel,
    TraceBatch,
    aes_sbox,
    bound_slack,
    build_bound_curve,
    estimate_cond_info,
    hamming_weight,
    key_posterior,
    ml_attack_success,
    reduced_sbox,
    sbox_for_bits,
    sharpness_gaps,
    simulate_batch,
)

__version__ = "0.1.0"

__all__ = [
    "AES_SBOX", "BoundCurve", "Channel", "ComparisonReport", "DefinitionTag",
    "EmptyPosteriorError", "EstimateResult", "GridQmin",
    "InvalidDistributionError", "Joint2", "Joint3", "LeakageModel", "LogBase",
    "Order", "Pmf", "QminResult", "SBOX_2BIT", "SBOX_4BIT", "SHANNON",
    "SuccessBound", "ThresholdNotReachedError", "TraceBatch",
    "UndefinedConditionalError", "aes_sbox", "alpha_cross_power",
    "alpha_divergence", "alpha_entropy", "alpha_norm", "arimoto_cond_entropy",
    "binary_alpha_div", "bound_slack", "build_bound_curve",
    "compare_definitions", "compose", "cond_alpha_divergence",
    "cond_alpha_info", "cond_info_000", "cond_info_001", "cond_info_010",
    "cond_info_by_tag", "cond_qstar", "conditional_slice",
    "estimate_cond_info", "fano_rhs", "hamming_weight", "invert_success_bound",
    "key_posterior", "load_distribution", "marginal", "ml_attack_success",
    "qmin_from_table", "qmin_search", "reduced_sbox", "save_distribution",
    "sbox_for_bits", "sharpness_gaps", "sibson_info", "sibson_qstar",
    "simulate_batch", "swap_xy",
]
