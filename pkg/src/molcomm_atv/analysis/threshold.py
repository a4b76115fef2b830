"""Optimal decision thresholds and the slot-length condition."""

import math
from typing import NamedTuple

import numpy as np
import structlog
from scipy import optimize

from molcomm_atv.analysis.ber import BerEvaluator, conditional_means
from molcomm_atv.exceptions import SingularityError
from molcomm_atv.models.channel import AbsorptionProfile, ChannelParams
from molcomm_atv.models.modulation import ModulationParams, NoiseParams
from molcomm_atv.physics.diffusion import absorption_cdf, time_to_peak

logger = structlog.get_logger()

# BER differences below this are ties
TIE_TOLERANCE = 1e-12
REFINE_XATOL = 1e-3


class OptimalThreshold(NamedTuple):
    """BER-minimizing threshold and the BER it achieves."""

    threshold: float
    p_e: float


def optimal_threshold_search(
    profile: AbsorptionProfile,
    mod: ModulationParams,
    noise: NoiseParams,
    receive_lag: int = 0,
    next_active: bool | None = None,
) -> OptimalThreshold:
    """Minimize the analytical BER over N_T in [0, M].

    A unit-step grid locates the best point (smallest threshold on ties), then a
    bounded scalar minimization within one molecule refines it to 1e-3. The
    refinement is kept only when it lowers the BER beyond the tie tolerance.
    """
    evaluator = BerEvaluator(profile, mod, noise, receive_lag, next_active)
    m = mod.molecules_per_one
    grid = np.arange(m + 1, dtype=np.float64)
    curve = evaluator.curve(grid)

    best = float(curve.p_e.min())
    index = int(np.argmax(curve.p_e <= best + TIE_TOLERANCE))
    threshold, p_e = float(grid[index]), float(curve.p_e[index])

    lower, upper = max(0.0, threshold - 1.0), min(float(m), threshold + 1.0)
    refined = optimize.minimize_scalar(
        lambda t: float(evaluator.p_e(t)),
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": REFINE_XATOL},
    )
    if refined.success and float(refined.fun) < p_e - TIE_TOLERANCE:
        threshold, p_e = float(refined.x), float(refined.fun)

    logger.debug(
        "optimal_threshold_search", threshold=threshold, p_e=p_e, grid_best=float(grid[index])
    )
    return OptimalThreshold(threshold=threshold, p_e=p_e)


def optimal_threshold_closed(
    e_sig0: float,
    e_isi0: float,
    e_sig1: float,
    e_isi1: float,
    noise: NoiseParams,
    mod: ModulationParams,
) -> float:
    """Gaussian-approximation optimum: midpoint of the means plus a prior correction.

    N_T = (μ₀ + μ₁)/2 + σ²/(μ₁ - μ₀) · ln(p₀/p₁)
    with μ_b = E[N_sig | b] + E[N_isi | b].

    Raises:
        SingularityError: If the conditional means coincide or a prior is zero
    """
    mean_zero = e_sig0 + e_isi0
    mean_one = e_sig1 + e_isi1
    separation = mean_one - mean_zero
    if separation == 0:
        msg = f"Conditional means are equal ({mean_one}); threshold is undefined"
        raise SingularityError(msg)
    if mod.prior_zero == 0 or mod.prior_one == 0:
        msg = "Both priors must be positive for the log-ratio term"
        raise SingularityError(msg)

    correction = noise.variance / separation * math.log(mod.prior_zero / mod.prior_one)
    return (mean_zero + mean_one) / 2 + correction


def closed_form_threshold(
    profile: AbsorptionProfile,
    mod: ModulationParams,
    noise: NoiseParams,
    receive_lag: int = 0,
    adjacent_prior: float | None = None,
) -> float:
    """optimal_threshold_closed with conditional means taken from the profile."""
    means = conditional_means(profile, mod, receive_lag, adjacent_prior)
    return optimal_threshold_closed(
        means.signal_zero, means.isi_zero, means.signal_one, means.isi_one, noise, mod
    )


def mean_optimal_threshold(
    ch: ChannelParams, mod: ModulationParams, ligand_factor: float = 1.0
) -> float:
    """Average optimal threshold M·(2G(r, 2τ) - G(r, τ))·factor / 2."""
    g_one = absorption_cdf(ch.distance, ch.slot_length, ch.diffusion_coefficient)
    g_two = absorption_cdf(ch.distance, 2 * ch.slot_length, ch.diffusion_coefficient)
    return mod.molecules_per_one * (2 * g_two - g_one) * ligand_factor / 2


def slot_condition(ch: ChannelParams) -> bool:
    """True when τ > r²/(6D)."""
    return ch.slot_length > time_to_peak(ch.distance, ch.diffusion_coefficient)
