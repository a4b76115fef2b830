"""Pydantic models for the diffusion channel (medium, geometry, receptors, absorption)."""

from typing import Any, NamedTuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import constants

from molcomm_atv.exceptions import ConfigurationError

# Table defaults for the ligand receiver and link geometry.
DEFAULT_DIFFUSION_COEFFICIENT = 10.0
DEFAULT_DISTANCE = 4.0
DEFAULT_SLOT_LENGTH = 4.0
DEFAULT_MAX_OFFSET = 50

PROFILE_SUM_TOLERANCE = 1e-9


class PhysicalMedium(BaseModel):
    """Fluid and carrier-molecule properties that determine the diffusion coefficient.

    SI units throughout; conversion to μm²/s happens in
    :func:`molcomm_atv.physics.diffusion.diffusion_coefficient`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    boltzmann_constant: float = Field(
        constants.Boltzmann, gt=0, description="Boltzmann constant k_B (J/K)"
    )
    temperature: float = Field(..., gt=0, description="Temperature T (K)")
    dynamic_viscosity: float = Field(..., gt=0, description="Dynamic viscosity η (Pa·s)")
    hydraulic_radius: float = Field(..., gt=0, description="Hydraulic radius R_H (m)")


class ChannelParams(BaseModel):
    """Link geometry and medium diffusivity.

    Lengths are in μm, times in seconds and the diffusion coefficient in μm²/s.
    A ``medium`` mapping may be supplied instead of ``diffusion_coefficient``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    diffusion_coefficient: float = Field(
        DEFAULT_DIFFUSION_COEFFICIENT, gt=0, description="Diffusion coefficient D (μm²/s)"
    )
    distance: float = Field(DEFAULT_DISTANCE, gt=0, description="Transceiver distance r (μm)")
    slot_length: float = Field(DEFAULT_SLOT_LENGTH, gt=0, description="Slot length τ (s)")

    @model_validator(mode="before")
    @classmethod
    def derive_from_medium(cls, data: Any) -> Any:
        """Replace a nested ``medium`` with the diffusion coefficient it implies."""
        if not isinstance(data, dict) or "medium" not in data:
            return data

        if data.get("diffusion_coefficient") is not None:
            msg = "Give either diffusion_coefficient or medium, not both"
            raise ValueError(msg)

        from molcomm_atv.physics.diffusion import diffusion_coefficient  # noqa: PLC0415

        result = dict(data)
        medium = result.pop("medium")
        if not isinstance(medium, PhysicalMedium):
            medium = PhysicalMedium.model_validate(medium)
        result["diffusion_coefficient"] = diffusion_coefficient(medium)
        return result

    @classmethod
    def from_medium(
        cls, medium: PhysicalMedium, distance: float, slot_length: float
    ) -> "ChannelParams":
        """Build channel parameters from medium physics and link geometry."""
        return cls.model_validate(
            {"medium": medium, "distance": distance, "slot_length": slot_length}
        )


class LigandParams(BaseModel):
    """Receptor kinetics of the ligand-based receiver."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    binding_rate: float = Field(0.1, gt=0, description="Receptor binding rate a")
    releasing_rate: float = Field(0.08, gt=0, description="Receptor releasing rate b")
    receptor_density: float = Field(1.0, gt=0, description="Receptor density Q (μmol/l)")

    @property
    def factor(self) -> float:
        """Scalar ligand factor aQ/b applied to absorption probabilities."""
        return self.binding_rate * self.receptor_density / self.releasing_rate


class SlotProbabilities(NamedTuple):
    """Per-molecule absorption probabilities seen by one receive slot."""

    signal: float
    previous: float
    following: float | None


class AbsorptionProfile(BaseModel):
    """Per-slot-offset absorption probabilities p(i, j) indexed by k = j - i."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    probabilities: tuple[float, ...] = Field(..., description="Scaled p(k), k = 0..max_offset")
    raw_probabilities: tuple[float, ...] = Field(
        ..., description="Unscaled CDF differences p'(k)"
    )
    max_offset: int = Field(..., ge=1, description="Largest offset covered")
    ligand_factor: float = Field(1.0, gt=0, description="aQ/b used for scaling")
    tail_mass: float = Field(0.0, ge=0, description="Raw mass beyond max_offset")
    clamped: bool = Field(False, description="Some scaled entry was clamped to 1")

    @model_validator(mode="before")
    @classmethod
    def fill_defaults(cls, data: Any) -> Any:
        """Allow a bare probability list; raw entries and max_offset follow from it."""
        if not isinstance(data, dict) or "probabilities" not in data:
            return data
        result = dict(data)
        probabilities = tuple(result["probabilities"])
        result.setdefault("raw_probabilities", probabilities)
        result.setdefault("max_offset", len(probabilities) - 1)
        return result

    @model_validator(mode="after")
    def validate_entries(self) -> "AbsorptionProfile":
        """Check lengths, probability range and total mass."""
        expected = self.max_offset + 1
        if len(self.probabilities) != expected or len(self.raw_probabilities) != expected:
            msg = f"Profile must hold {expected} entries for max_offset={self.max_offset}"
            raise ValueError(msg)

        for k, p in enumerate(self.probabilities):
            if not 0.0 <= p <= 1.0:
                msg = f"Probability at offset {k} outside [0, 1]: {p}"
                raise ValueError(msg)

        if self.ligand_factor <= 1.0 and sum(self.probabilities) > 1.0 + PROFILE_SUM_TOLERANCE:
            msg = f"Profile mass {sum(self.probabilities)} exceeds 1"
            raise ValueError(msg)
        return self

    def __getitem__(self, offset: int) -> float:
        """Return the scaled probability at a slot offset."""
        return self.probabilities[offset]

    def __len__(self) -> int:
        """Number of offsets covered (max_offset + 1)."""
        return len(self.probabilities)

    def slot_probabilities(self, receive_lag: int = 0) -> SlotProbabilities:
        """Probabilities of the signal, previous-bit and next-bit molecules.

        With receive slot n_r = n_t + receive_lag the current bit is absorbed at
        offset ``receive_lag``, the previous bit at ``receive_lag + 1`` and the
        next bit at ``receive_lag - 1`` (only when the lag is positive).

        Raises:
            ConfigurationError: If the profile does not cover the needed offsets
        """
        if receive_lag < 0:
            msg = f"receive_lag must be >= 0, got {receive_lag}"
            raise ConfigurationError(msg, key="receive_lag")
        if receive_lag + 1 > self.max_offset:
            msg = (
                f"Profile covers offsets 0..{self.max_offset}, "
                f"receive_lag={receive_lag} needs {receive_lag + 1}"
            )
            raise ConfigurationError(msg, key="max_offset")

        return SlotProbabilities(
            signal=self.probabilities[receive_lag],
            previous=self.probabilities[receive_lag + 1],
            following=self.probabilities[receive_lag - 1] if receive_lag > 0 else None,
        )
