"""Signal to interference plus noise ratio and its inversion to a noise level."""

import math
from typing import Literal, NamedTuple

import numpy as np
import numpy.typing as npt
import structlog

from molcomm_atv.exceptions import DomainError, UnachievableSinrError
from molcomm_atv.models.channel import AbsorptionProfile
from molcomm_atv.models.modulation import ModulationParams, NoiseParams
from molcomm_atv.models.results import SinrResult

logger = structlog.get_logger()

NEGATIVE_VARIANCE_TOLERANCE = 1e-9


class ExpectedPowers(NamedTuple):
    """Expected squared signal and ISI counts per slot."""

    signal: float
    isi: float

    @property
    def ceiling(self) -> float:
        """Noise-free SINR."""
        if self.isi == 0:
            return math.inf if self.signal > 0 else 0.0
        return self.signal / self.isi


def sinr(
    signal_counts: npt.ArrayLike, isi_counts: npt.ArrayLike, noise: NoiseParams
) -> SinrResult:
    """γ_e = mean(signal²) / (mean(isi²) + floor(σ²)).

    A zero denominator gives inf, or 0 when the signal power is zero too.

    Raises:
        DomainError: If the sequences are empty or differ in length
    """
    signal = np.asarray(signal_counts, dtype=np.float64)
    isi = np.asarray(isi_counts, dtype=np.float64)
    if signal.size == 0:
        msg = "sinr needs at least one slot"
        raise DomainError(msg)
    if signal.shape != isi.shape:
        msg = f"signal and isi lengths differ: {signal.size} vs {isi.size}"
        raise DomainError(msg)

    return sinr_from_powers(float(np.mean(signal**2)), float(np.mean(isi**2)), noise)


def sinr_from_powers(signal_power: float, isi_power: float, noise: NoiseParams) -> SinrResult:
    """SinrResult from already averaged signal and ISI powers."""
    noise_power = float(math.floor(noise.variance))
    denominator = isi_power + noise_power
    if denominator == 0:
        gamma = math.inf if signal_power > 0 else 0.0
    else:
        gamma = signal_power / denominator
    return SinrResult(
        gamma_e=gamma, signal_power=signal_power, isi_power=isi_power, noise_power=noise_power
    )


def _second_moment(n: int, p: float) -> float:
    return n * p * (1 - p) + (n * p) ** 2


def expected_powers(
    profile: AbsorptionProfile,
    mod: ModulationParams,
    bit_prior: float | None = None,
    receive_lag: int = 0,
    isi_term: Literal["previous", "next"] = "previous",
) -> ExpectedPowers:
    """Expected signal and ISI powers under i.i.d. bits with P(1) = bit_prior."""
    prior = mod.prior_one if bit_prior is None else bit_prior
    probs = profile.slot_probabilities(receive_lag)
    m = mod.molecules_per_one

    signal = prior * _second_moment(m, probs.signal)
    if isi_term == "previous":
        isi = prior * _second_moment(m, probs.previous)
    elif probs.following is not None:
        isi = prior * _second_moment(m, probs.following)
    else:
        isi = 0.0
    return ExpectedPowers(signal=signal, isi=isi)


def noise_for_target_sinr(
    profile: AbsorptionProfile,
    mod: ModulationParams,
    bit_prior: float | None,
    target_gamma: float,
    receive_lag: int = 0,
    isi_term: Literal["previous", "next"] = "previous",
) -> NoiseParams:
    """Noise level whose expected γ_e equals ``target_gamma``: σ² = E[P_sig]/γ - E[P_isi].

    Raises:
        DomainError: If target_gamma <= 0
        UnachievableSinrError: If the target exceeds the noise-free ceiling
    """
    if not target_gamma > 0:
        msg = f"target_gamma must be > 0, got {target_gamma}"
        raise DomainError(msg)

    powers = expected_powers(profile, mod, bit_prior, receive_lag, isi_term)
    variance = powers.signal / target_gamma - powers.isi
    if variance < 0:
        if variance < -NEGATIVE_VARIANCE_TOLERANCE * max(1.0, powers.isi):
            ceiling = powers.ceiling
            msg = f"Target SINR {target_gamma} exceeds the noise-free ceiling {ceiling:.6g}"
            logger.error("sinr_unachievable", target=target_gamma, ceiling=ceiling)
            raise UnachievableSinrError(msg, ceiling=ceiling)
        variance = 0.0

    noise = NoiseParams(std_dev=math.sqrt(variance))
    logger.debug(
        "noise_for_target_sinr",
        target=target_gamma,
        std_dev=noise.std_dev,
        isi_term=isi_term,
    )
    return noise
