"""Diffusion-based molecular communication link simulator with an adaptive threshold receiver."""

from molcomm_atv.analysis import (
    BerEvaluator,
    ber_fixed,
    closed_form_threshold,
    mean_optimal_threshold,
    noise_for_target_sinr,
    optimal_threshold_closed,
    optimal_threshold_search,
    sinr,
    slot_condition,
)
from molcomm_atv.models import (
    AbsorptionProfile,
    AtvConfig,
    AtvState,
    BerResult,
    BitSequence,
    ChannelParams,
    ExperimentConfig,
    LigandParams,
    ModulationParams,
    NoiseParams,
    PhysicalMedium,
    SimResult,
    SinrResult,
    SlotComposition,
)
from molcomm_atv.physics import (
    RxDistribution,
    absorption_cdf,
    build_profile,
    diffusion_coefficient,
    green_function,
    isi_pmf,
    ligand_scale,
    noise_density,
    rx_distribution,
    sample_slot,
    signal_pmf,
    slot_absorption_prob,
    time_to_peak,
)
from molcomm_atv.receiver import AtvReceiver, atv_step, demod_fixed, modulate
from molcomm_atv.simulation import run_experiment, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AbsorptionProfile",
    "AtvConfig",
    "AtvReceiver",
    "AtvState",
    "BerEvaluator",
    "BerResult",
    "BitSequence",
    "ChannelParams",
    "ExperimentConfig",
    "LigandParams",
    "ModulationParams",
    "NoiseParams",
    "PhysicalMedium",
    "RxDistribution",
    "SimResult",
    "SinrResult",
    "SlotComposition",
    "absorption_cdf",
    "atv_step",
    "ber_fixed",
    "build_profile",
    "closed_form_threshold",
    "demod_fixed",
    "diffusion_coefficient",
    "green_function",
    "isi_pmf",
    "ligand_scale",
    "mean_optimal_threshold",
    "modulate",
    "noise_density",
    "noise_for_target_sinr",
    "optimal_threshold_closed",
    "optimal_threshold_search",
    "rx_distribution",
    "run_experiment",
    "run_sweep",
    "sample_slot",
    "signal_pmf",
    "sinr",
    "slot_absorption_prob",
    "slot_condition",
    "time_to_peak",
]


def main() -> None:
    """CLI entry point."""
    from molcomm_atv.cli import main as cli_main  # noqa: PLC0415

    raise SystemExit(cli_main())
