"""Diffusion channel physics: diffusivity, Green function and first-passage absorption."""

import math
from typing import NamedTuple, overload

import numpy as np
import numpy.typing as npt
import structlog
from scipy import special

from molcomm_atv.exceptions import DomainError
from molcomm_atv.models.channel import (
    DEFAULT_MAX_OFFSET,
    AbsorptionProfile,
    ChannelParams,
    LigandParams,
    PhysicalMedium,
)

logger = structlog.get_logger()

# m²/s -> μm²/s
SQUARE_METRES_TO_SQUARE_MICRONS = 1e12
TAIL_MASS_WARNING = 1e-3


class LigandScaled(NamedTuple):
    """Ligand-scaled probability and whether it hit the upper clamp."""

    probability: float
    clamped: bool


def diffusion_coefficient(medium: PhysicalMedium) -> float:
    """Stokes-Einstein diffusion coefficient D = k_B T / (6π η R_H) in μm²/s.

    Raises:
        DomainError: If any medium field is not strictly positive
    """
    for name, value in medium.model_dump().items():
        if value <= 0:
            msg = f"{name} must be > 0, got {value}"
            raise DomainError(msg)

    coefficient = (
        medium.boltzmann_constant
        * medium.temperature
        / (6 * math.pi * medium.dynamic_viscosity * medium.hydraulic_radius)
    )
    return coefficient * SQUARE_METRES_TO_SQUARE_MICRONS


def green_function(x: float, t: float, D: float) -> float:
    """Point-release density (4πDt)^(-3/2) exp(-x²/4Dt).

    Raises:
        DomainError: If t <= 0 or D <= 0
    """
    if t <= 0:
        msg = f"t must be > 0, got {t}"
        raise DomainError(msg)
    if D <= 0:
        msg = f"D must be > 0, got {D}"
        raise DomainError(msg)
    return (4 * math.pi * D * t) ** -1.5 * math.exp(-(x**2) / (4 * D * t))


@overload
def absorption_cdf(x: float, t: float, D: float) -> float: ...


@overload
def absorption_cdf(
    x: float, t: npt.NDArray[np.float64], D: float
) -> npt.NDArray[np.float64]: ...


def absorption_cdf(
    x: float, t: float | npt.NDArray[np.float64], D: float
) -> float | npt.NDArray[np.float64]:
    """Probability G(x, t) = erfc(x / √(4Dt)) that a molecule is absorbed by time t.

    Accepts a scalar time or an array of times. G(x, 0) = 0.

    Raises:
        DomainError: If x <= 0, D <= 0 or any t < 0
    """
    if x <= 0:
        msg = f"x must be > 0, got {x}"
        raise DomainError(msg)
    if D <= 0:
        msg = f"D must be > 0, got {D}"
        raise DomainError(msg)

    times = np.asarray(t, dtype=np.float64)
    if np.any(times < 0):
        msg = "t must be >= 0"
        raise DomainError(msg)

    with np.errstate(divide="ignore"):
        argument = x / np.sqrt(4 * D * times)
    values = special.erfc(argument)
    if values.ndim == 0:
        return float(values)
    return values


def slot_absorption_prob(offset: int, ch: ChannelParams) -> float:
    """Raw probability p'(k) = G(r, (k+1)τ) - G(r, kτ) of absorption k slots after release.

    Raises:
        DomainError: If offset < 0
    """
    if offset < 0:
        msg = f"offset must be >= 0, got {offset}"
        raise DomainError(msg)

    upper = absorption_cdf(ch.distance, (offset + 1) * ch.slot_length, ch.diffusion_coefficient)
    lower = absorption_cdf(ch.distance, offset * ch.slot_length, ch.diffusion_coefficient)
    return max(0.0, upper - lower)


def ligand_scale(p_raw: float, lig: LigandParams) -> LigandScaled:
    """Scale a raw probability by aQ/b, clamping at 1.

    Raises:
        DomainError: If p_raw is outside [0, 1]
    """
    if not 0.0 <= p_raw <= 1.0:
        msg = f"p_raw must be in [0, 1], got {p_raw}"
        raise DomainError(msg)

    scaled = lig.factor * p_raw
    if scaled > 1.0:
        return LigandScaled(probability=1.0, clamped=True)
    return LigandScaled(probability=scaled, clamped=False)


def time_to_peak(r: float, D: float) -> float:
    """Characteristic time r²/(6D).

    Raises:
        DomainError: If r <= 0 or D <= 0
    """
    if r <= 0 or D <= 0:
        msg = f"r and D must be > 0, got r={r}, D={D}"
        raise DomainError(msg)
    return r**2 / (6 * D)


def build_profile(
    ch: ChannelParams, lig: LigandParams, max_offset: int = DEFAULT_MAX_OFFSET
) -> AbsorptionProfile:
    """Precompute ligand-scaled absorption probabilities for offsets 0..max_offset.

    Raises:
        DomainError: If max_offset < 1
    """
    if max_offset < 1:
        msg = f"max_offset must be >= 1, got {max_offset}"
        raise DomainError(msg)

    times = ch.slot_length * np.arange(max_offset + 2, dtype=np.float64)
    cdf = absorption_cdf(ch.distance, times, ch.diffusion_coefficient)
    raw = np.clip(np.diff(cdf), 0.0, None)

    scaled = [ligand_scale(float(p), lig) for p in raw]
    clamped = [k for k, entry in enumerate(scaled) if entry.clamped]
    tail_mass = max(0.0, 1.0 - float(cdf[-1]))

    if clamped:
        logger.warning(
            "ligand_scale_clamped",
            offsets=clamped,
            factor=lig.factor,
            max_unclamped=float(lig.factor * raw.max()),
        )
    if tail_mass > TAIL_MASS_WARNING:
        logger.warning("profile_tail_mass", tail_mass=tail_mass, max_offset=max_offset)

    profile = AbsorptionProfile(
        probabilities=tuple(entry.probability for entry in scaled),
        raw_probabilities=tuple(float(p) for p in raw),
        max_offset=max_offset,
        ligand_factor=lig.factor,
        tail_mass=tail_mass,
        clamped=bool(clamped),
    )
    logger.info(
        "profile_built",
        distance=ch.distance,
        slot_length=ch.slot_length,
        diffusion_coefficient=ch.diffusion_coefficient,
        max_offset=max_offset,
        signal=profile[0],
        isi=profile[1],
    )
    return profile
