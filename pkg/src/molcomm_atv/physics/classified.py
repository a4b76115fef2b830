"""Classified molecule model: a received slot is signal + adjacent-bit ISI + Gaussian noise.

Exact distributions are kept as an integer-count PMF (signal ⊛ ISI) paired with
the Gaussian noise standard deviation, so CDFs can be evaluated at any real
threshold. Sampling helpers realize the same model for Monte Carlo runs.
"""

from typing import NamedTuple

import numpy as np
import numpy.typing as npt
import structlog
from scipy import stats

from molcomm_atv.exceptions import ConfigurationError, DomainError
from molcomm_atv.models.channel import AbsorptionProfile
from molcomm_atv.models.modulation import (
    BitSequence,
    ModulationParams,
    NoiseParams,
    SlotComposition,
)

logger = structlog.get_logger()

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


def _check_bit(name: str, bit: int) -> None:
    if bit not in (0, 1):
        msg = f"{name} must be 0 or 1, got {bit}"
        raise DomainError(msg)


def _check_probability(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        msg = f"{name} must be in [0, 1], got {p}"
        raise DomainError(msg)


def _emission_pmf(bit: int, mod: ModulationParams, p: float) -> FloatArray:
    """PMF over absorbed counts of one bit's emission: Binomial(M, p) or a point mass at 0."""
    if bit == 0:
        return np.ones(1)
    n = mod.molecules_per_one
    return stats.binom.pmf(np.arange(n + 1), n, p)


def _resolve_next_active(next_active: bool | None, receive_lag: int) -> bool:
    if next_active is None:
        return receive_lag > 0
    if next_active and receive_lag == 0:
        msg = "next-bit ISI requires receive_lag >= 1"
        raise ConfigurationError(msg, key="receive_lag")
    return next_active


def signal_pmf(k0: int, bit: int, mod: ModulationParams, p_sig: float) -> float:
    """P(N_sig = k0) for the current bit.

    Raises:
        DomainError: If k0 < 0 or p_sig is not a probability
    """
    if k0 < 0:
        msg = f"k0 must be >= 0, got {k0}"
        raise DomainError(msg)
    _check_bit("bit", bit)
    _check_probability("p_sig", p_sig)

    if bit == 0:
        return 1.0 if k0 == 0 else 0.0
    return float(stats.binom.pmf(k0, mod.molecules_per_one, p_sig))


def isi_pmf(
    k1: int,
    prev_bit: int,
    next_bit: int,
    mod: ModulationParams,
    p_prev: float,
    p_next: float,
    next_active: bool,
) -> float:
    """P(N_isi = k1): previous-bit leakage convolved with next-bit leakage when active.

    Raises:
        DomainError: If k1 < 0 or an input is out of range
    """
    if k1 < 0:
        msg = f"k1 must be >= 0, got {k1}"
        raise DomainError(msg)
    _check_bit("prev_bit", prev_bit)
    _check_bit("next_bit", next_bit)
    _check_probability("p_prev", p_prev)
    _check_probability("p_next", p_next)

    pmf = _emission_pmf(prev_bit, mod, p_prev)
    if next_active:
        pmf = np.convolve(pmf, _emission_pmf(next_bit, mod, p_next))
    return float(pmf[k1]) if k1 < len(pmf) else 0.0


def noise_density(k2: float, noise: NoiseParams) -> float:
    """Gaussian density of the counting noise at k2.

    Raises:
        DomainError: If σ = 0 (the noise is a point mass)
    """
    if noise.std_dev <= 0:
        msg = "noise density is undefined for std_dev = 0"
        raise DomainError(msg)
    return float(stats.norm.pdf(k2, loc=0.0, scale=noise.std_dev))


class RxDistribution:
    """Distribution of the received statistic: integer-count PMF plus N(0, σ²).

    ``pmf[k]`` is P(N_sig + N_isi = k). With σ = 0 the statistic is purely discrete.
    Evaluation methods accept scalars or arrays of thresholds, including ±inf.
    """

    def __init__(self, pmf: npt.ArrayLike, noise_std: float = 0.0) -> None:
        """Initialize the distribution.

        Args:
            pmf: Probabilities of integer counts 0..len(pmf)-1
            noise_std: Gaussian noise standard deviation σ
        """
        values = np.asarray(pmf, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            msg = "pmf must be a non-empty 1-D array"
            raise DomainError(msg)
        if noise_std < 0:
            msg = f"noise_std must be >= 0, got {noise_std}"
            raise DomainError(msg)
        values.setflags(write=False)
        self.pmf = values
        self.noise_std = float(noise_std)
        self.support = np.arange(values.size, dtype=np.float64)

    def __repr__(self) -> str:
        return (
            f"RxDistribution(support=0..{self.support.size - 1}, "
            f"mean={self.mean():.6g}, noise_std={self.noise_std:.6g})"
        )

    @property
    def total_mass(self) -> float:
        """Σ pmf (1 up to rounding)."""
        return float(self.pmf.sum())

    def mean(self) -> float:
        """E[total]; the noise is zero-mean."""
        return float(self.support @ self.pmf)

    def variance(self) -> float:
        """Var[total] = Var[count] + σ²."""
        mean = self.mean()
        return float((self.support - mean) ** 2 @ self.pmf) + self.noise_std**2

    def _grid(self, x: npt.ArrayLike) -> FloatArray:
        return np.asarray(x, dtype=np.float64)[..., np.newaxis] - self.support

    def _reduce(self, weights: FloatArray, x: npt.ArrayLike) -> float | FloatArray:
        result = np.clip(weights @ self.pmf, 0.0, 1.0)
        return float(result) if np.ndim(x) == 0 else result

    def cdf(self, x: npt.ArrayLike) -> float | FloatArray:
        """P(total <= x) = Σ_k pmf(k)·Φ((x - k)/σ)."""
        offsets = self._grid(x)
        if self.noise_std == 0:
            weights = (offsets >= 0).astype(np.float64)
        else:
            weights = stats.norm.cdf(offsets / self.noise_std)
        return self._reduce(weights, x)

    def prob_below(self, x: npt.ArrayLike) -> float | FloatArray:
        """P(total < x); equals cdf(x) whenever σ > 0."""
        offsets = self._grid(x)
        if self.noise_std == 0:
            weights = (offsets > 0).astype(np.float64)
        else:
            weights = stats.norm.cdf(offsets / self.noise_std)
        return self._reduce(weights, x)

    def prob_at_or_above(self, x: npt.ArrayLike) -> float | FloatArray:
        """P(total >= x), computed from the upper tail."""
        offsets = self._grid(x)
        if self.noise_std == 0:
            weights = (offsets <= 0).astype(np.float64)
        else:
            weights = stats.norm.sf(offsets / self.noise_std)
        return self._reduce(weights, x)


def rx_distribution(
    prev_bit: int,
    cur_bit: int,
    next_bit: int,
    profile: AbsorptionProfile,
    mod: ModulationParams,
    noise: NoiseParams,
    next_active: bool | None = None,
    receive_lag: int = 0,
) -> RxDistribution:
    """Exact distribution of N_rx for one (previous, current, next) bit context.

    ``next_active`` defaults to ``receive_lag > 0``.

    Raises:
        ConfigurationError: If the profile lacks the offsets the lag needs
    """
    for name, bit in (("prev_bit", prev_bit), ("cur_bit", cur_bit), ("next_bit", next_bit)):
        _check_bit(name, bit)
    active = _resolve_next_active(next_active, receive_lag)
    probs = profile.slot_probabilities(receive_lag)

    pmf = np.convolve(
        _emission_pmf(cur_bit, mod, probs.signal), _emission_pmf(prev_bit, mod, probs.previous)
    )
    if active and probs.following is not None:
        pmf = np.convolve(pmf, _emission_pmf(next_bit, mod, probs.following))
    return RxDistribution(pmf, noise.std_dev)


def sample_slot(
    prev_bit: int,
    cur_bit: int,
    next_bit: int,
    profile: AbsorptionProfile,
    mod: ModulationParams,
    noise: NoiseParams,
    next_active: bool | None,
    rng: np.random.Generator,
    receive_lag: int = 0,
) -> SlotComposition:
    """Draw one slot's signal, ISI and noise.

    Draw order is signal, previous-bit ISI, next-bit ISI, noise.
    """
    for name, bit in (("prev_bit", prev_bit), ("cur_bit", cur_bit), ("next_bit", next_bit)):
        _check_bit(name, bit)
    active = _resolve_next_active(next_active, receive_lag)
    probs = profile.slot_probabilities(receive_lag)
    m = mod.molecules_per_one

    signal = int(rng.binomial(m * cur_bit, probs.signal))
    isi = int(rng.binomial(m * prev_bit, probs.previous))
    if active and probs.following is not None:
        isi += int(rng.binomial(m * next_bit, probs.following))
    noise_value = float(rng.normal(0.0, noise.std_dev))
    return SlotComposition(signal_count=signal, isi_count=isi, noise_value=noise_value)


class FrameSample(NamedTuple):
    """Per-slot components of one simulated frame."""

    signal: IntArray
    isi_previous: IntArray
    isi_next: IntArray
    noise: FloatArray

    @property
    def isi(self) -> IntArray:
        """Total ISI count per slot."""
        return self.isi_previous + self.isi_next

    @property
    def total(self) -> FloatArray:
        """Received statistic N_rx per slot."""
        return self.signal + self.isi + self.noise


def neighbour_bits(bits: npt.NDArray[np.int8]) -> tuple[npt.NDArray[np.int8], npt.NDArray[np.int8]]:
    """Previous and next bit of every slot; zero outside the frame."""
    zero = np.zeros(1, dtype=bits.dtype)
    return np.concatenate([zero, bits[:-1]]), np.concatenate([bits[1:], zero])


def sample_frame(
    bits: BitSequence | npt.NDArray[np.int8],
    profile: AbsorptionProfile,
    mod: ModulationParams,
    noise: NoiseParams,
    rng: np.random.Generator,
    receive_lag: int = 0,
    next_active: bool | None = None,
) -> FrameSample:
    """Vectorized sample_slot over a whole frame.

    Draw order is all signal counts, all previous-bit ISI, all next-bit ISI, all noise.
    """
    array = bits.as_array() if isinstance(bits, BitSequence) else np.asarray(bits, dtype=np.int8)
    active = _resolve_next_active(next_active, receive_lag)
    probs = profile.slot_probabilities(receive_lag)
    m = mod.molecules_per_one
    prev_bits, next_bits = neighbour_bits(array)

    signal = rng.binomial(m * array.astype(np.int64), probs.signal)
    isi_previous = rng.binomial(m * prev_bits.astype(np.int64), probs.previous)
    if active and probs.following is not None:
        isi_next = rng.binomial(m * next_bits.astype(np.int64), probs.following)
    else:
        isi_next = np.zeros(array.size, dtype=np.int64)
    noise_values = rng.normal(0.0, noise.std_dev, size=array.size)

    logger.debug("frame_sampled", slots=array.size, ones=int(array.sum()))
    return FrameSample(
        signal=signal.astype(np.int64),
        isi_previous=isi_previous.astype(np.int64),
        isi_next=isi_next.astype(np.int64),
        noise=noise_values,
    )
