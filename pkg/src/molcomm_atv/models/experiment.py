"""Declarative experiment description loaded from JSON configuration files."""

import copy
from pathlib import Path
from typing import Annotated, Any, Literal

import structlog
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from molcomm_atv.exceptions import ConfigurationError
from molcomm_atv.models.channel import DEFAULT_MAX_OFFSET, ChannelParams, LigandParams
from molcomm_atv.models.modulation import ModulationParams
from molcomm_atv.models.receiver import DEFAULT_TOLERANCE, AtvConfig

logger = structlog.get_logger()

DEFAULT_TARGET_SINR = 10.0
DEFAULT_NUM_SLOTS = 10_000
MAX_SEED = 2**64 - 1

IsiTerm = Literal["previous", "next"]
BitPattern = Literal["random", "alternating"]


class NoiseSpec(BaseModel):
    """Noise given either as σ or as a target SINR γ_e (exactly one).

    ``isi_term`` picks which adjacent bit's leakage counts as interference in γ_e.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    std_dev: float | None = Field(None, ge=0, description="Noise standard deviation σ")
    target_sinr: float | None = Field(None, gt=0, description="Target γ_e")
    isi_term: IsiTerm = Field("previous", description="ISI count entering γ_e")

    @model_validator(mode="before")
    @classmethod
    def default_target(cls, data: Any) -> Any:
        """Fall back to the default γ_e when neither σ nor a target is given."""
        if not isinstance(data, dict):
            return data
        if data.get("std_dev") is None and data.get("target_sinr") is None:
            return {**data, "target_sinr": DEFAULT_TARGET_SINR}
        return data

    @model_validator(mode="after")
    def validate_exclusive(self) -> "NoiseSpec":
        """Exactly one of std_dev / target_sinr."""
        if (self.std_dev is None) == (self.target_sinr is None):
            msg = "Exactly one of noise.std_dev and noise.target_sinr must be set"
            raise ValueError(msg)
        return self


class FixedReceiverSpec(BaseModel):
    """Fixed-threshold receiver; ``threshold=None`` means M/2."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["fixed"] = "fixed"
    threshold: float | None = Field(None, description="Decision threshold N_T")

    def resolve_threshold(self, mod: ModulationParams) -> float:
        """Threshold to decode with."""
        return mod.midpoint if self.threshold is None else self.threshold


class AtvReceiverSpec(BaseModel):
    """ATV receiver settings; unset bounds follow from M."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["atv"] = "atv"
    tolerance: float = Field(DEFAULT_TOLERANCE, ge=0)
    initial_threshold: float | None = None
    threshold_min: float = 0.0
    threshold_max: float | None = None
    window: int | None = Field(None, ge=1)

    def to_config(self, mod: ModulationParams) -> AtvConfig:
        """Materialize an AtvConfig for the given modulation."""
        return AtvConfig.for_modulation(
            mod,
            tolerance=self.tolerance,
            initial_threshold=self.initial_threshold,
            threshold_min=self.threshold_min,
            threshold_max=self.threshold_max,
            window=self.window,
        )


ReceiverSpec = Annotated[FixedReceiverSpec | AtvReceiverSpec, Field(discriminator="kind")]


class SweepAxis(BaseModel):
    """One swept parameter: a dotted config path and the values it takes."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    path: str = Field(..., min_length=1, description="Dotted path, e.g. channel.distance")
    values: list[float | int | str] = Field(..., description="Values in sweep order")


class ExperimentConfig(BaseModel):
    """Complete description of a simulation experiment."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    channel: ChannelParams = Field(default_factory=ChannelParams)
    ligand: LigandParams = Field(default_factory=LigandParams)
    modulation: ModulationParams = Field(default_factory=ModulationParams)
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    receiver: ReceiverSpec = Field(default_factory=FixedReceiverSpec)
    num_slots: int = Field(DEFAULT_NUM_SLOTS, ge=1, description="Bits per trial frame")
    num_trials: int = Field(1, ge=1, description="Independent frames")
    seed: int = Field(0, ge=0, le=MAX_SEED, description="Master seed (u64)")
    max_offset: int = Field(DEFAULT_MAX_OFFSET, ge=1, description="Profile length - 1")
    receive_lag: int = Field(0, ge=0, description="n_r - n_t in slots")
    bit_pattern: BitPattern = Field("random", description="random or alternating")
    workers: int | None = Field(None, ge=1, description="Trial threads")
    sweep: list[SweepAxis] = Field(default_factory=list)

    @field_validator("receiver")
    @classmethod
    def validate_receiver_range(cls, v: ReceiverSpec, info: ValidationInfo) -> ReceiverSpec:
        """ATV clamp range must hold the initial threshold for this modulation."""
        mod = info.data.get("modulation")
        if isinstance(v, AtvReceiverSpec) and mod is not None:
            try:
                v.to_config(mod)
            except ValidationError as e:
                msg = e.errors(include_url=False)[0]["msg"].removeprefix("Value error, ")
                raise ValueError(msg) from e
        return v

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        """Load and validate a JSON experiment file.

        Raises:
            ConfigurationError: If the file cannot be read or fails validation
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            msg = f"Cannot read config {path}: {e}"
            raise ConfigurationError(msg, key="config") from e

        try:
            cfg = cls.model_validate_json(text)
        except ValidationError as e:
            raise _configuration_error(e, source=str(path)) from e

        logger.debug("config_loaded", path=str(path), sweep_axes=len(cfg.sweep))
        return cfg

    def with_values(self, point: dict[str, Any]) -> "ExperimentConfig":
        """Copy of this config with dotted-path fields replaced and re-validated.

        Setting ``noise.target_sinr`` clears ``noise.std_dev`` and vice versa.

        Raises:
            ConfigurationError: If a path does not name a config field
        """
        data = self.model_dump()
        data["sweep"] = []
        for dotted, value in point.items():
            _assign(data, dotted, value)

        try:
            return type(self).model_validate(data)
        except ValidationError as e:
            raise _configuration_error(e, source="sweep point") from e

    def with_overrides(self, **fields: Any) -> "ExperimentConfig":
        """Copy with top-level fields replaced (CLI flags), validated."""
        data = self.model_dump()
        data.update({k: v for k, v in fields.items() if v is not None})
        try:
            return type(self).model_validate(data)
        except ValidationError as e:
            raise _configuration_error(e, source="command line") from e


def _assign(data: dict[str, Any], dotted: str, value: Any) -> None:
    parts = dotted.split(".")
    node: Any = data
    for part in parts[:-1]:
        if not isinstance(node, dict) or not isinstance(node.get(part), dict):
            msg = f"Unknown sweep path: {dotted}"
            raise ConfigurationError(msg, key=dotted)
        node = node[part]

    leaf = parts[-1]
    if not isinstance(node, dict) or leaf not in node or isinstance(node[leaf], dict | list):
        msg = f"Unknown sweep path: {dotted}"
        raise ConfigurationError(msg, key=dotted)

    node[leaf] = copy.deepcopy(value)
    # noise is specified by exactly one of the two fields
    if parts[:-1] == ["noise"] and leaf in ("std_dev", "target_sinr"):
        other = "target_sinr" if leaf == "std_dev" else "std_dev"
        node[other] = None


def _configuration_error(error: ValidationError, source: str) -> ConfigurationError:
    details = error.errors(include_url=False, include_context=False)
    first = details[0] if details else {}
    key = ".".join(str(part) for part in first.get("loc", ())) or None
    msg = f"Invalid configuration ({source}): {key or 'root'}: {first.get('msg', error)}"
    logger.error("config_invalid", source=source, key=key, error_count=len(details))
    return ConfigurationError(msg, key=key, errors=[dict(d) for d in details])
