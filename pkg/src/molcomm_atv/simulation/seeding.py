"""Counter-based random stream derivation.

A sweep point's seed is the first 64-bit word of
``SeedSequence(master, spawn_key=(point_index,))``; trial t of a run with seed
s draws from ``Philox(SeedSequence(s, spawn_key=(t,)))``. Streams do not
depend on execution order or thread count.
"""

import os

import numpy as np

from molcomm_atv.exceptions import ConfigurationError

THREADS_ENV_VAR = "MOLCOMM_ATV_THREADS"


def point_seed(master_seed: int, point_index: int) -> int:
    """Seed of one sweep point, derived from the master seed and the point index."""
    sequence = np.random.SeedSequence(master_seed, spawn_key=(point_index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def trial_generator(seed: int, trial_index: int) -> np.random.Generator:
    """Independent generator for one trial of a run."""
    sequence = np.random.SeedSequence(seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.Philox(sequence))


def resolve_workers(configured: int | None, num_trials: int) -> int:
    """Thread count for trials: environment override, then config, then CPU count.

    Raises:
        ConfigurationError: If the environment value is not a positive integer
    """
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is not None and raw.strip():
        try:
            workers = int(raw)
        except ValueError as e:
            msg = f"{THREADS_ENV_VAR} must be an integer, got {raw!r}"
            raise ConfigurationError(msg, key=THREADS_ENV_VAR) from e
        if workers < 1:
            msg = f"{THREADS_ENV_VAR} must be >= 1, got {workers}"
            raise ConfigurationError(msg, key=THREADS_ENV_VAR)
    elif configured is not None:
        workers = configured
    else:
        workers = os.cpu_count() or 1
    return max(1, min(workers, num_trials))
