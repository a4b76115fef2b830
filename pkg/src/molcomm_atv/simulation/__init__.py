"""Seeded Monte Carlo simulation of the OOK link."""

from molcomm_atv.simulation.engine import (
    TrialPool,
    analytical_ber,
    resolve_noise,
    run_experiment,
    run_sweep,
    run_trial,
    sweep_points,
)
from molcomm_atv.simulation.seeding import (
    THREADS_ENV_VAR,
    point_seed,
    resolve_workers,
    trial_generator,
)

__all__ = [
    "THREADS_ENV_VAR",
    "TrialPool",
    "analytical_ber",
    "point_seed",
    "resolve_noise",
    "resolve_workers",
    "run_experiment",
    "run_sweep",
    "run_trial",
    "sweep_points",
    "trial_generator",
]
