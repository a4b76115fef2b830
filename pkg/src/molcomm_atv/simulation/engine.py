"""Seeded Monte Carlo engine: frames, receivers, aggregation and parameter sweeps."""

import itertools
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np
import structlog

from molcomm_atv.analysis.ber import ber_fixed
from molcomm_atv.analysis.sinr import noise_for_target_sinr, sinr_from_powers
from molcomm_atv.exceptions import ConfigurationError, MolcommError, SimulationError
from molcomm_atv.models.channel import AbsorptionProfile
from molcomm_atv.models.experiment import AtvReceiverSpec, ExperimentConfig
from molcomm_atv.models.modulation import BitSequence, NoiseParams
from molcomm_atv.models.results import BerResult, SimResult, SweepRow, TrialOutcome
from molcomm_atv.physics.classified import sample_frame
from molcomm_atv.physics.diffusion import build_profile
from molcomm_atv.receiver.modem import AtvReceiver, demod_frame
from molcomm_atv.simulation.seeding import point_seed, resolve_workers, trial_generator

logger = structlog.get_logger()

# two-sided 95% normal quantile
CONFIDENCE_Z = 1.96

T = TypeVar("T")


class TrialPool:
    """Run indexed tasks on a bounded thread pool and gather results in index order."""

    def __init__(self, max_workers: int = 1) -> None:
        """Initialize the pool.

        Args:
            max_workers: Maximum concurrent tasks; 1 runs inline
        """
        self.max_workers = max(1, max_workers)

    def run(self, task: Callable[[int], T], count: int) -> list[T]:
        """Evaluate ``task(i)`` for i in 0..count-1.

        Raises:
            SimulationError: If a task fails with a non-library exception
        """
        if self.max_workers == 1 or count <= 1:
            return [self._call(task, i) for i in range(count)]

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            futures = [executor.submit(self._call, task, i) for i in range(count)]
            return [future.result() for future in futures]

    @staticmethod
    def _call(task: Callable[[int], T], index: int) -> T:
        try:
            return task(index)
        except MolcommError:
            raise
        except Exception as e:
            logger.error("trial_failed", trial=index, error=str(e))
            msg = f"Trial {index} failed: {e}"
            raise SimulationError(msg, trial=index) from e


def resolve_noise(cfg: ExperimentConfig, profile: AbsorptionProfile) -> NoiseParams:
    """Explicit σ, or the σ that reaches the configured target SINR."""
    if cfg.noise.target_sinr is None:
        return NoiseParams(std_dev=cfg.noise.std_dev or 0.0)
    return noise_for_target_sinr(
        profile,
        cfg.modulation,
        None,
        cfg.noise.target_sinr,
        receive_lag=cfg.receive_lag,
        isi_term=cfg.noise.isi_term,
    )


def analytical_ber(cfg: ExperimentConfig) -> BerResult:
    """Analytical BER at the fixed threshold (ATV receivers: their initial threshold)."""
    profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset)
    noise = resolve_noise(cfg, profile)
    if isinstance(cfg.receiver, AtvReceiverSpec):
        threshold = cfg.receiver.to_config(cfg.modulation).initial_threshold
    else:
        threshold = cfg.receiver.resolve_threshold(cfg.modulation)
    return ber_fixed(threshold, profile, cfg.modulation, noise, cfg.receive_lag)


def run_trial(
    cfg: ExperimentConfig,
    profile: AbsorptionProfile,
    noise: NoiseParams,
    trial: int,
) -> TrialOutcome:
    """Simulate and decode one frame on its own random stream."""
    rng = trial_generator(cfg.seed, trial)
    mod = cfg.modulation

    if cfg.bit_pattern == "alternating":
        bits = BitSequence.alternating(cfg.num_slots).as_array()
    else:
        bits = (rng.random(cfg.num_slots) < mod.prior_one).astype(np.int8)

    frame = sample_frame(bits, profile, mod, noise, rng, receive_lag=cfg.receive_lag)
    totals = frame.total

    trace: tuple[float, ...] = ()
    final_threshold: float | None = None
    changes = 0
    if isinstance(cfg.receiver, AtvReceiverSpec):
        receiver = AtvReceiver(cfg.receiver.to_config(mod))
        decoded = receiver.run(totals)
        trace = receiver.threshold_trace
        final_threshold = receiver.threshold
        changes = receiver.threshold_changes
    else:
        decoded = demod_frame(totals, cfg.receiver.resolve_threshold(mod))

    isi = frame.isi_previous if cfg.noise.isi_term == "previous" else frame.isi_next
    outcome = TrialOutcome(
        trial=trial,
        num_slots=cfg.num_slots,
        ones_sent=int(bits.sum()),
        errors_one=int(np.count_nonzero((bits == 1) & (decoded == 0))),
        errors_zero=int(np.count_nonzero((bits == 0) & (decoded == 1))),
        signal_power_sum=float(np.sum(frame.signal.astype(np.float64) ** 2)),
        isi_power_sum=float(np.sum(isi.astype(np.float64) ** 2)),
        threshold_trace=trace,
        final_threshold=final_threshold,
        threshold_changes=changes,
    )
    logger.debug(
        "trial_complete",
        trial=trial,
        errors=outcome.errors_one + outcome.errors_zero,
        final_threshold=final_threshold,
    )
    return outcome


def aggregate(
    cfg: ExperimentConfig, outcomes: list[TrialOutcome], noise: NoiseParams
) -> SimResult:
    """Combine trial outcomes (in trial order) into a SimResult."""
    num_bits = sum(o.num_slots for o in outcomes)
    ones = sum(o.ones_sent for o in outcomes)
    zeros = sum(o.zeros_sent for o in outcomes)
    errors_one = sum(o.errors_one for o in outcomes)
    errors_zero = sum(o.errors_zero for o in outcomes)
    total_errors = errors_one + errors_zero

    ber = total_errors / num_bits
    measured = sinr_from_powers(
        sum(o.signal_power_sum for o in outcomes) / num_bits,
        sum(o.isi_power_sum for o in outcomes) / num_bits,
        noise,
    )

    threshold_used = None
    if not isinstance(cfg.receiver, AtvReceiverSpec):
        threshold_used = cfg.receiver.resolve_threshold(cfg.modulation)

    first = outcomes[0]
    return SimResult(
        ber_empirical=ber,
        ci_halfwidth=CONFIDENCE_Z * math.sqrt(ber * (1 - ber) / num_bits),
        ber_one=errors_one / ones if ones else 0.0,
        ber_zero=errors_zero / zeros if zeros else 0.0,
        sinr_measured=measured.gamma_e,
        errors_one=errors_one,
        errors_zero=errors_zero,
        total_errors=total_errors,
        num_bits=num_bits,
        noise_std_dev=noise.std_dev,
        threshold_used=threshold_used,
        threshold_trace=first.threshold_trace,
        final_thresholds=tuple(
            o.final_threshold for o in outcomes if o.final_threshold is not None
        ),
        threshold_changes=first.threshold_changes,
        seed=cfg.seed,
    )


def run_experiment(cfg: ExperimentConfig) -> SimResult:
    """Run all trials of one configuration.

    The output depends only on the config (seed included), never on the
    worker count.
    """
    profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset)
    noise = resolve_noise(cfg, profile)
    workers = resolve_workers(cfg.workers, cfg.num_trials)

    logger.info(
        "run_experiment",
        slots=cfg.num_slots,
        trials=cfg.num_trials,
        receiver=cfg.receiver.kind,
        noise_std_dev=noise.std_dev,
        workers=workers,
        seed=cfg.seed,
    )

    outcomes = TrialPool(workers).run(
        lambda trial: run_trial(cfg, profile, noise, trial), cfg.num_trials
    )
    result = aggregate(cfg, outcomes, noise)

    logger.info(
        "run_experiment_complete",
        ber=result.ber_empirical,
        errors=result.total_errors,
        sinr=result.sinr_measured,
        sinr_db=result.sinr_db,
    )
    return result


def sweep_points(cfg: ExperimentConfig) -> list[dict[str, float | int | str]]:
    """Cartesian product of the sweep axes, first axis varying slowest.

    Raises:
        ConfigurationError: If the sweep is empty, repeats a path or has an empty axis
    """
    if not cfg.sweep:
        msg = "sweep must list at least one axis"
        raise ConfigurationError(msg, key="sweep")

    paths = [axis.path for axis in cfg.sweep]
    duplicates = sorted({p for p in paths if paths.count(p) > 1})
    if duplicates:
        msg = f"sweep repeats path(s): {', '.join(duplicates)}"
        raise ConfigurationError(msg, key=duplicates[0])

    for axis in cfg.sweep:
        if not axis.values:
            msg = f"sweep axis {axis.path} has no values"
            raise ConfigurationError(msg, key=axis.path)
        cfg.with_values({axis.path: axis.values[0]})

    return [
        dict(zip(paths, combo, strict=True))
        for combo in itertools.product(*(axis.values for axis in cfg.sweep))
    ]


def run_sweep(cfg: ExperimentConfig) -> list[SweepRow]:
    """Run every sweep point in order; point i runs with seed point_seed(master, i)."""
    points = sweep_points(cfg)
    logger.info("run_sweep", points=len(points), axes=[axis.path for axis in cfg.sweep])

    rows: list[SweepRow] = []
    for index, point in enumerate(points):
        point_cfg = cfg.with_values({**point, "seed": point_seed(cfg.seed, index)})
        result = run_experiment(point_cfg)
        rows.append(SweepRow(index=index, point=point, result=result))
        logger.info(
            "sweep_point_complete",
            index=index,
            total=len(points),
            point=point,
            ber=result.ber_empirical,
        )
    return rows
