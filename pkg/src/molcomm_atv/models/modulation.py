"""Pydantic models for OOK modulation, counting noise and received-slot composition."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

DEFAULT_MOLECULES_PER_ONE = 500
PRIOR_TOLERANCE = 1e-12

Bit = Literal[0, 1]


class ModulationParams(BaseModel):
    """On-off keying: M molecules for bit 1, none for bit 0."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    molecules_per_one: int = Field(
        DEFAULT_MOLECULES_PER_ONE, ge=1, description="Molecules emitted for bit 1 (M)"
    )
    prior_one: float = Field(0.5, ge=0, le=1, description="p(b(i)=1)")
    prior_zero: float = Field(0.5, ge=0, le=1, description="p(b(i)=0)")

    @model_validator(mode="after")
    def validate_priors(self) -> "ModulationParams":
        """Priors must sum to one."""
        if abs(self.prior_one + self.prior_zero - 1.0) > PRIOR_TOLERANCE:
            msg = f"prior_one + prior_zero must equal 1, got {self.prior_one + self.prior_zero}"
            raise ValueError(msg)
        return self

    @property
    def midpoint(self) -> float:
        """Conventional fixed threshold M/2."""
        return self.molecules_per_one / 2

    def prior(self, bit: int) -> float:
        """Prior probability of transmitting ``bit``."""
        return self.prior_one if bit == 1 else self.prior_zero


class NoiseParams(BaseModel):
    """Zero-mean Gaussian counting noise."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    std_dev: float = Field(0.0, ge=0, description="Noise standard deviation σ (molecules)")

    @property
    def variance(self) -> float:
        """Noise power σ²."""
        return self.std_dev**2


class SlotComposition(BaseModel):
    """One received slot split into signal, ISI and noise molecules."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    signal_count: int = Field(..., ge=0, description="Signal molecules k₀")
    isi_count: int = Field(..., ge=0, description="ISI molecules k₁")
    noise_value: float = Field(..., description="Noise k₂ (may be negative)")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def total(self) -> float:
        """Received statistic k₀ + k₁ + k₂."""
        return self.signal_count + self.isi_count + self.noise_value


class BitSequence(BaseModel):
    """Ordered frame of transmitted bits b(i)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    bits: tuple[Bit, ...] = Field(..., description="Bits in transmission order")

    @field_validator("bits", mode="before")
    @classmethod
    def coerce_array(cls, v: object) -> object:
        """Accept numpy arrays as well as plain sequences."""
        if isinstance(v, np.ndarray):
            return tuple(int(b) for b in v.tolist())
        return v

    @classmethod
    def random(cls, length: int, rng: np.random.Generator, prior_one: float = 0.5) -> "BitSequence":
        """Draw i.i.d. Bernoulli(prior_one) bits."""
        return cls(bits=(rng.random(length) < prior_one).astype(np.int8))

    @classmethod
    def alternating(cls, length: int) -> "BitSequence":
        """Deterministic 1010... pattern."""
        return cls(bits=tuple((i + 1) % 2 for i in range(length)))

    def __len__(self) -> int:
        """Frame length."""
        return len(self.bits)

    def as_array(self) -> np.ndarray:
        """Bits as an int8 numpy array."""
        return np.asarray(self.bits, dtype=np.int8)
