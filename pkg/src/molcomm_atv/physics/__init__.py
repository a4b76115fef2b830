"""Channel physics and the classified molecule model."""

from molcomm_atv.physics.classified import (
    FrameSample,
    RxDistribution,
    isi_pmf,
    noise_density,
    rx_distribution,
    sample_frame,
    sample_slot,
    signal_pmf,
)
from molcomm_atv.physics.diffusion import (
    LigandScaled,
    absorption_cdf,
    build_profile,
    diffusion_coefficient,
    green_function,
    ligand_scale,
    slot_absorption_prob,
    time_to_peak,
)

__all__ = [
    "FrameSample",
    "LigandScaled",
    "RxDistribution",
    "absorption_cdf",
    "build_profile",
    "diffusion_coefficient",
    "green_function",
    "isi_pmf",
    "ligand_scale",
    "noise_density",
    "rx_distribution",
    "sample_frame",
    "sample_slot",
    "signal_pmf",
    "slot_absorption_prob",
    "time_to_peak",
]
