"""Command-line front end: load an experiment config, run it, write CSV."""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import structlog

from molcomm_atv.analysis.ber import BerEvaluator
from molcomm_atv.analysis.threshold import (
    closed_form_threshold,
    mean_optimal_threshold,
    optimal_threshold_search,
    slot_condition,
)
from molcomm_atv.exceptions import (
    ConfigurationError,
    DomainError,
    MolcommError,
    SingularityError,
)
from molcomm_atv.formats.csv_table import CsvEncoder
from molcomm_atv.models.experiment import (
    MAX_SEED,
    AtvReceiverSpec,
    ExperimentConfig,
    FixedReceiverSpec,
)
from molcomm_atv.physics.diffusion import build_profile, time_to_peak
from molcomm_atv.simulation.engine import analytical_ber, resolve_noise, run_experiment, run_sweep

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

DEFAULT_SWEEP_START = 50.0
DEFAULT_SWEEP_STOP = 450.0
DEFAULT_SWEEP_STEP = 10.0


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed <= MAX_SEED:
        msg = f"seed must be in [0, 2^64 - 1], got {value}"
        raise argparse.ArgumentTypeError(msg)
    return seed


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per experiment type."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON experiment file (defaults if omitted)")
    common.add_argument("--out", type=Path, help="Write CSV here instead of stdout")
    common.add_argument("--seed", type=_seed, help="Master seed, overrides the config")
    common.add_argument("--max-offset", type=int, help="Profile offsets, overrides the config")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info logs, -vv for debug"
    )

    parser = argparse.ArgumentParser(
        prog="molcomm-atv",
        description="Diffusion molecular communication link: analysis and Monte Carlo.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser(
        "channel-profile", parents=[common], help="Per-offset absorption probabilities"
    )
    commands.add_parser(
        "ber-sweep", parents=[common], help="Analytical and empirical BER per sweep point"
    )
    atv = commands.add_parser(
        "atv-run", parents=[common], help="ATV receiver against the fixed M/2 baseline"
    )
    atv.add_argument("--trace", type=Path, help="Write the per-slot threshold trace here")

    sweep = commands.add_parser(
        "threshold-sweep", parents=[common], help="Analytical error rates over thresholds"
    )
    sweep.add_argument("--start", type=float, default=DEFAULT_SWEEP_START)
    sweep.add_argument("--stop", type=float, default=DEFAULT_SWEEP_STOP)
    sweep.add_argument("--step", type=float, default=DEFAULT_SWEEP_STEP)
    return parser


def configure_logging(verbosity: int) -> None:
    """Send structured logs to stderr, WARNING by default."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file (or defaults) with command-line overrides applied."""
    cfg = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(seed=args.seed, max_offset=args.max_offset)


def cmd_channel_profile(cfg: ExperimentConfig) -> str:
    """Absorption profile table with time-to-peak diagnostics."""
    profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset)
    peak = time_to_peak(cfg.channel.distance, cfg.channel.diffusion_coefficient)
    return CsvEncoder.encode_channel_profile(cfg, profile, peak, slot_condition(cfg.channel))


def cmd_ber_sweep(cfg: ExperimentConfig) -> str:
    """Simulated and analytical BER for every sweep point."""
    rows = run_sweep(cfg)
    analytical = [analytical_ber(cfg.with_values(row.point)) for row in rows]
    return CsvEncoder.encode_ber_sweep(cfg, rows, analytical)


def cmd_atv_run(cfg: ExperimentConfig, trace_path: Path | None) -> str:
    """ATV run plus a fixed-threshold baseline on the same random streams."""
    if not isinstance(cfg.receiver, AtvReceiverSpec):
        msg = 'atv-run needs receiver.kind = "atv"'
        raise ConfigurationError(msg, key="receiver.kind")

    atv = run_experiment(cfg)
    baseline_cfg = cfg.model_copy(update={"receiver": FixedReceiverSpec()})
    baseline = run_experiment(baseline_cfg)
    expected = analytical_ber(baseline_cfg)

    if trace_path is not None:
        trace_path.write_text(CsvEncoder.encode_trace(atv.threshold_trace), encoding="utf-8")
        logger.info("trace_written", path=str(trace_path), slots=len(atv.threshold_trace))
    return CsvEncoder.encode_atv_summary(cfg, atv, baseline, expected)


def cmd_threshold_sweep(cfg: ExperimentConfig, start: float, stop: float, step: float) -> str:
    """Analytical p_e, p_e⁰ and p_e¹ on a threshold grid."""
    if step <= 0:
        msg = f"--step must be > 0, got {step}"
        raise ConfigurationError(msg, key="step")
    if stop < start:
        msg = f"--stop ({stop}) must not be below --start ({start})"
        raise ConfigurationError(msg, key="stop")

    profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset)
    noise = resolve_noise(cfg, profile)
    evaluator = BerEvaluator(profile, cfg.modulation, noise, cfg.receive_lag)
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    curve = evaluator.curve(start + step * np.arange(count))

    optimum = optimal_threshold_search(profile, cfg.modulation, noise, cfg.receive_lag)
    try:
        closed: float | None = closed_form_threshold(
            profile, cfg.modulation, noise, cfg.receive_lag
        )
    except SingularityError:
        closed = None
    mean_optimal = mean_optimal_threshold(cfg.channel, cfg.modulation, cfg.ligand.factor)
    return CsvEncoder.encode_threshold_sweep(
        cfg, curve, optimum, closed, mean_optimal, noise.std_dev
    )


def run(args: argparse.Namespace) -> str:
    """Dispatch a parsed command line and return the CSV text."""
    cfg = load_config(args)
    if args.command == "channel-profile":
        return cmd_channel_profile(cfg)
    if args.command == "ber-sweep":
        return cmd_ber_sweep(cfg)
    if args.command == "atv-run":
        return cmd_atv_run(cfg, args.trace)
    return cmd_threshold_sweep(cfg, args.start, args.stop, args.step)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code.

    Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose)
    try:
        output = run(args)
        if args.out is not None:
            args.out.write_text(output, encoding="utf-8")
        else:
            sys.stdout.write(output)
    except (ConfigurationError, DomainError) as e:
        logger.error("command_failed", command=args.command, error=str(e))
        print(f"molcomm-atv: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (MolcommError, OSError) as e:
        logger.error("command_failed", command=args.command, error=str(e))
        print(f"molcomm-atv: error: {e}", file=sys.stderr)
        return EXIT_RUNTIME

    return EXIT_OK
