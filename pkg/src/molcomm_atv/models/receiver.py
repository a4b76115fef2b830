"""Pydantic models for the adaptive threshold variation (ATV) receiver."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from molcomm_atv.models.modulation import ModulationParams

DEFAULT_TOLERANCE = 30.0


class AtvConfig(BaseModel):
    """Tuning of the ATV receiver.

    ``window`` limits the A/B running means to the most recent decisions;
    ``None`` accumulates from the first slot.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    tolerance: float = Field(DEFAULT_TOLERANCE, ge=0, description="Tolerant interval μ")
    initial_threshold: float = Field(..., description="N_T(1), molecules")
    threshold_min: float = Field(0.0, description="Lower clamp for N_T")
    threshold_max: float = Field(..., description="Upper clamp for N_T")
    window: int | None = Field(None, ge=1, description="Sliding window length (slots)")

    @model_validator(mode="after")
    def validate_bounds(self) -> "AtvConfig":
        """Initial threshold must lie within the clamp range."""
        if not self.threshold_min <= self.initial_threshold <= self.threshold_max:
            msg = (
                f"Need threshold_min <= initial_threshold <= threshold_max, got "
                f"{self.threshold_min} / {self.initial_threshold} / {self.threshold_max}"
            )
            raise ValueError(msg)
        return self

    @classmethod
    def for_modulation(
        cls,
        mod: ModulationParams,
        tolerance: float = DEFAULT_TOLERANCE,
        initial_threshold: float | None = None,
        threshold_min: float = 0.0,
        threshold_max: float | None = None,
        window: int | None = None,
    ) -> "AtvConfig":
        """Config with N_T(1) = M/2 and clamp range [0, M] unless overridden."""
        return cls(
            tolerance=tolerance,
            initial_threshold=mod.midpoint if initial_threshold is None else initial_threshold,
            threshold_min=threshold_min,
            threshold_max=(
                float(mod.molecules_per_one) if threshold_max is None else threshold_max
            ),
            window=window,
        )


class AtvState(BaseModel):
    """Learning state after ``slot_index`` decoded slots."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    threshold: float = Field(..., description="Current threshold N_T(i)")
    count_ones: int = Field(0, ge=0, description="Decoded ones n₁")
    count_zeros: int = Field(0, ge=0, description="Decoded zeros n₀")
    sum_ones: float = Field(0.0, description="Σ N_rx over decoded ones")
    sum_zeros: float = Field(0.0, description="Σ N_rx over decoded zeros")
    slot_index: int = Field(0, ge=0, description="Slots processed so far")
    history: tuple[tuple[int, float], ...] = Field(
        (), description="(decoded bit, N_rx) of the current window; empty when unwindowed"
    )

    @model_validator(mode="after")
    def validate_counters(self) -> "AtvState":
        """Counters must match the slots seen and empty classes carry no mass."""
        counted = self.count_ones + self.count_zeros
        expected = len(self.history) if self.history else self.slot_index
        if counted != expected:
            msg = f"count_ones + count_zeros = {counted}, expected {expected}"
            raise ValueError(msg)
        if self.count_ones == 0 and self.sum_ones != 0.0:
            msg = "sum_ones must be 0 when count_ones is 0"
            raise ValueError(msg)
        if self.count_zeros == 0 and self.sum_zeros != 0.0:
            msg = "sum_zeros must be 0 when count_zeros is 0"
            raise ValueError(msg)
        return self

    @classmethod
    def initial(cls, cfg: AtvConfig) -> "AtvState":
        """State before the first slot."""
        return cls(threshold=cfg.initial_threshold)

    @property
    def mean_ones(self) -> float | None:
        """Mean N_rx over decoded ones, if any."""
        return self.sum_ones / self.count_ones if self.count_ones else None

    @property
    def mean_zeros(self) -> float | None:
        """Mean N_rx over decoded zeros, if any."""
        return self.sum_zeros / self.count_zeros if self.count_zeros else None
