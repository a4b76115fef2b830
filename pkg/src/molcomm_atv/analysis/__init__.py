"""Closed-form performance analysis: BER, optimal thresholds and SINR."""

from molcomm_atv.analysis.ber import (
    BerCurve,
    BerEvaluator,
    ConditionalMeans,
    ber_fixed,
    conditional_means,
)
from molcomm_atv.analysis.sinr import (
    ExpectedPowers,
    expected_powers,
    noise_for_target_sinr,
    sinr,
    sinr_from_powers,
)
from molcomm_atv.analysis.threshold import (
    OptimalThreshold,
    closed_form_threshold,
    mean_optimal_threshold,
    optimal_threshold_closed,
    optimal_threshold_search,
    slot_condition,
)

__all__ = [
    "BerCurve",
    "BerEvaluator",
    "ConditionalMeans",
    "ExpectedPowers",
    "OptimalThreshold",
    "ber_fixed",
    "closed_form_threshold",
    "conditional_means",
    "expected_powers",
    "mean_optimal_threshold",
    "noise_for_target_sinr",
    "optimal_threshold_closed",
    "optimal_threshold_search",
    "sinr",
    "sinr_from_powers",
    "slot_condition",
]
