"""Pydantic models for channel, modulation, receiver, experiments and results."""

from molcomm_atv.models.channel import (
    AbsorptionProfile,
    ChannelParams,
    LigandParams,
    PhysicalMedium,
    SlotProbabilities,
)
from molcomm_atv.models.experiment import (
    AtvReceiverSpec,
    ExperimentConfig,
    FixedReceiverSpec,
    NoiseSpec,
    SweepAxis,
)
from molcomm_atv.models.modulation import (
    BitSequence,
    ModulationParams,
    NoiseParams,
    SlotComposition,
)
from molcomm_atv.models.receiver import AtvConfig, AtvState
from molcomm_atv.models.results import BerResult, SimResult, SinrResult, SweepRow, TrialOutcome

__all__ = [
    "AbsorptionProfile",
    "AtvConfig",
    "AtvReceiverSpec",
    "AtvState",
    "BerResult",
    "BitSequence",
    "ChannelParams",
    "ExperimentConfig",
    "FixedReceiverSpec",
    "LigandParams",
    "ModulationParams",
    "NoiseParams",
    "NoiseSpec",
    "PhysicalMedium",
    "SimResult",
    "SinrResult",
    "SlotComposition",
    "SlotProbabilities",
    "SweepAxis",
    "SweepRow",
    "TrialOutcome",
]
