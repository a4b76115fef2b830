"""Pydantic models for analytical and simulated performance results."""

import math
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

BER_TOLERANCE = 1e-12


class BerResult(BaseModel):
    """Analytical bit error rate at a fixed threshold."""

    model_config = ConfigDict(frozen=True)

    p_e: float = Field(..., ge=0, le=1, description="Overall BER")
    p_e_one: float = Field(..., ge=0, le=1, description="Error probability of bit 1")
    p_e_zero: float = Field(..., ge=0, le=1, description="Error probability of bit 0")
    threshold_used: float = Field(..., description="Decision threshold N_T")
    prior_one: float = Field(0.5, ge=0, le=1, description="p(b(i)=1) used to combine")

    @model_validator(mode="after")
    def validate_combination(self) -> "BerResult":
        """p_e must be the prior-weighted sum of the conditional error rates."""
        expected = (1.0 - self.prior_one) * self.p_e_zero + self.prior_one * self.p_e_one
        if abs(self.p_e - expected) > BER_TOLERANCE:
            msg = f"p_e {self.p_e} does not match prior-weighted sum {expected}"
            raise ValueError(msg)
        return self


class SinrResult(BaseModel):
    """Signal to interference plus noise ratio γ_e."""

    model_config = ConfigDict(frozen=True)

    gamma_e: float = Field(..., ge=0, description="γ_e; inf when the denominator is zero")
    signal_power: float = Field(..., ge=0, description="Mean squared signal count")
    isi_power: float = Field(..., ge=0, description="Mean squared ISI count")
    noise_power: float = Field(..., ge=0, description="floor(σ²)")


class TrialOutcome(BaseModel):
    """Tallies of one simulated frame."""

    model_config = ConfigDict(frozen=True)

    trial: int = Field(..., ge=0)
    num_slots: int = Field(..., ge=1)
    ones_sent: int = Field(..., ge=0)
    errors_one: int = Field(..., ge=0)
    errors_zero: int = Field(..., ge=0)
    signal_power_sum: float = Field(..., ge=0, description="Σ signal² over the frame")
    isi_power_sum: float = Field(..., ge=0, description="Σ ISI² over the frame")
    threshold_trace: tuple[float, ...] = Field((), description="N_T(i) per slot (ATV only)")
    final_threshold: float | None = Field(None, description="Threshold after the last slot")
    threshold_changes: int = Field(0, ge=0, description="Slots after which N_T moved")

    @property
    def zeros_sent(self) -> int:
        """Bits 0 transmitted."""
        return self.num_slots - self.ones_sent


class SimResult(BaseModel):
    """Aggregated Monte Carlo outcome of one experiment point."""

    model_config = ConfigDict(frozen=True)

    ber_empirical: float = Field(..., ge=0, le=1, description="Bit errors / bits")
    ci_halfwidth: float = Field(..., ge=0, description="95% normal-approximation half-width")
    ber_one: float = Field(..., ge=0, le=1, description="Empirical error rate of sent ones")
    ber_zero: float = Field(..., ge=0, le=1, description="Empirical error rate of sent zeros")
    sinr_measured: float = Field(..., ge=0, description="γ_e measured over all trials")
    errors_one: int = Field(..., ge=0, description="Ones decoded as zero")
    errors_zero: int = Field(..., ge=0, description="Zeros decoded as one")
    total_errors: int = Field(..., ge=0)
    num_bits: int = Field(..., ge=1)
    noise_std_dev: float = Field(..., ge=0, description="σ used (resolved from target if needed)")
    threshold_used: float | None = Field(None, description="Fixed threshold, if fixed receiver")
    threshold_trace: tuple[float, ...] = Field((), description="Trial-0 N_T(i) per slot")
    final_thresholds: tuple[float, ...] = Field((), description="Last N_T of each trial")
    threshold_changes: int = Field(0, ge=0, description="Moves in the trial-0 trace")
    seed: int = Field(..., ge=0, description="Seed the point was run with")

    @model_validator(mode="after")
    def validate_errors(self) -> "SimResult":
        """Per-symbol error counts must add up to the total."""
        if self.errors_one + self.errors_zero != self.total_errors:
            msg = "errors_one + errors_zero must equal total_errors"
            raise ValueError(msg)
        return self

    @property
    def sinr_db(self) -> float:
        """γ_e in decibels."""
        if self.sinr_measured <= 0:
            return -math.inf
        return 10 * math.log10(self.sinr_measured)


class SweepRow(BaseModel):
    """One sweep point and its simulation outcome."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0)
    point: dict[str, Any] = Field(default_factory=dict, description="path -> value")
    result: SimResult
