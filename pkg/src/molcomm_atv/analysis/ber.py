"""Analytical bit error rate of the threshold detector under the classified model."""

import math
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
import structlog

from molcomm_atv.exceptions import DomainError
from molcomm_atv.models.channel import AbsorptionProfile
from molcomm_atv.models.modulation import ModulationParams, NoiseParams
from molcomm_atv.models.results import BerResult
from molcomm_atv.physics.classified import RxDistribution, rx_distribution

logger = structlog.get_logger()


class ConditionalMeans(NamedTuple):
    """Expected signal and ISI counts given the current bit."""

    signal_zero: float
    isi_zero: float
    signal_one: float
    isi_one: float

    @property
    def zero(self) -> float:
        """E[N_rx | bit 0]."""
        return self.signal_zero + self.isi_zero

    @property
    def one(self) -> float:
        """E[N_rx | bit 1]."""
        return self.signal_one + self.isi_one

    @property
    def midpoint(self) -> float:
        """Midpoint of the two conditional means."""
        return (self.zero + self.one) / 2


class BerCurve(NamedTuple):
    """Error rates over a grid of thresholds."""

    thresholds: npt.NDArray[np.float64]
    p_e: npt.NDArray[np.float64]
    p_e_one: npt.NDArray[np.float64]
    p_e_zero: npt.NDArray[np.float64]


def conditional_means(
    profile: AbsorptionProfile,
    mod: ModulationParams,
    receive_lag: int = 0,
    adjacent_prior: float | None = None,
) -> ConditionalMeans:
    """Mean signal and ISI counts for bit 0 and bit 1.

    Adjacent bits are 1 with probability ``adjacent_prior`` (default
    ``mod.prior_one``); ``adjacent_prior=1.0`` conditions on both neighbours
    having emitted.
    """
    prior = mod.prior_one if adjacent_prior is None else adjacent_prior
    if not 0.0 <= prior <= 1.0:
        msg = f"adjacent_prior must be in [0, 1], got {prior}"
        raise DomainError(msg)

    probs = profile.slot_probabilities(receive_lag)
    m = mod.molecules_per_one
    isi = m * prior * probs.previous
    if probs.following is not None:
        isi += m * prior * probs.following
    return ConditionalMeans(
        signal_zero=0.0, isi_zero=isi, signal_one=m * probs.signal, isi_one=isi
    )


def _mixture(parts: list[tuple[float, RxDistribution]], noise_std: float) -> RxDistribution:
    size = max(dist.pmf.size for _, dist in parts)
    pmf = np.zeros(size)
    for weight, dist in parts:
        pmf[: dist.pmf.size] += weight * dist.pmf
    return RxDistribution(pmf, noise_std)


class BerEvaluator:
    """Conditional N_rx distributions of one channel, reusable across thresholds.

    Neighbouring bits are averaged with the modulation priors. The next bit
    only contributes when ``next_active`` (default ``receive_lag > 0``).
    """

    def __init__(
        self,
        profile: AbsorptionProfile,
        mod: ModulationParams,
        noise: NoiseParams,
        receive_lag: int = 0,
        next_active: bool | None = None,
    ) -> None:
        """Initialize the evaluator.

        Args:
            profile: Absorption profile of the channel
            mod: Modulation and bit priors
            noise: Counting noise
            receive_lag: n_r - n_t in slots
            next_active: Include next-bit ISI
        """
        self.mod = mod
        self.noise = noise
        active = receive_lag > 0 if next_active is None else next_active
        next_bits = (0, 1) if active else (0,)

        conditional: dict[int, list[tuple[float, RxDistribution]]] = {0: [], 1: []}
        for cur_bit in (0, 1):
            for prev_bit in (0, 1):
                for next_bit in next_bits:
                    weight = mod.prior(prev_bit) * (mod.prior(next_bit) if active else 1.0)
                    dist = rx_distribution(
                        prev_bit, cur_bit, next_bit, profile, mod, noise, active, receive_lag
                    )
                    conditional[cur_bit].append((weight, dist))

        self.given_zero = _mixture(conditional[0], noise.std_dev)
        self.given_one = _mixture(conditional[1], noise.std_dev)

    def p_e_one(self, threshold: npt.ArrayLike) -> float | npt.NDArray[np.float64]:
        """P(N_rx < N_T | bit 1)."""
        return self.given_one.prob_below(threshold)

    def p_e_zero(self, threshold: npt.ArrayLike) -> float | npt.NDArray[np.float64]:
        """P(N_rx >= N_T | bit 0)."""
        return self.given_zero.prob_at_or_above(threshold)

    def p_e(self, threshold: npt.ArrayLike) -> float | npt.NDArray[np.float64]:
        """Prior-weighted error probability."""
        prior = self.mod.prior_one
        return (1.0 - prior) * self.p_e_zero(threshold) + prior * self.p_e_one(threshold)

    def evaluate(self, threshold: float) -> BerResult:
        """BerResult at one threshold (±inf allowed)."""
        if math.isnan(threshold):
            msg = "threshold must not be NaN"
            raise DomainError(msg)
        p_one = float(self.p_e_one(threshold))
        p_zero = float(self.p_e_zero(threshold))
        prior = self.mod.prior_one
        return BerResult(
            p_e=(1.0 - prior) * p_zero + prior * p_one,
            p_e_one=p_one,
            p_e_zero=p_zero,
            threshold_used=threshold,
            prior_one=prior,
        )

    def curve(self, thresholds: npt.ArrayLike) -> BerCurve:
        """Error rates on a threshold grid."""
        grid = np.asarray(thresholds, dtype=np.float64)
        p_one = np.atleast_1d(self.p_e_one(grid))
        p_zero = np.atleast_1d(self.p_e_zero(grid))
        prior = self.mod.prior_one
        return BerCurve(
            thresholds=np.atleast_1d(grid),
            p_e=(1.0 - prior) * p_zero + prior * p_one,
            p_e_one=p_one,
            p_e_zero=p_zero,
        )


def ber_fixed(
    threshold: float,
    profile: AbsorptionProfile,
    mod: ModulationParams,
    noise: NoiseParams,
    receive_lag: int = 0,
    next_active: bool | None = None,
) -> BerResult:
    """Analytical BER of a fixed-threshold detector."""
    result = BerEvaluator(profile, mod, noise, receive_lag, next_active).evaluate(threshold)
    logger.debug("ber_fixed", threshold=threshold, p_e=result.p_e)
    return result
