"""CSV encoding of profiles, sweeps and receiver traces.

Numbers are written with 9 significant digits; metadata goes into leading
``#`` comment rows so the files stay loadable by any CSV reader that skips
comments.
"""

import csv
import io
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import numpy as np

from molcomm_atv.analysis.ber import BerCurve
from molcomm_atv.analysis.threshold import OptimalThreshold
from molcomm_atv.models.channel import AbsorptionProfile
from molcomm_atv.models.experiment import ExperimentConfig
from molcomm_atv.models.results import BerResult, SimResult, SweepRow

SIGNIFICANT_DIGITS = 9


def _escape_comment(s: str) -> str:
    """Flatten text into a single comment line.

    Line breaks become spaces and other control characters are dropped so a
    value can never start a new CSV row.
    """
    s = s.replace("\r\n", " ").replace("\n", " ").replace("\r", " ")
    return "".join(c for c in s if ord(c) >= 32 or c == "\t")


class CsvEncoder:
    """Encode results as comma-separated tables with '#' comment headers."""

    @staticmethod
    def encode_table(
        columns: Sequence[str],
        rows: Iterable[Sequence[Any]],
        comments: Mapping[str, Any] | None = None,
    ) -> str:
        """Encode a header row, data rows and optional ``# key: value`` comments.

        Args:
            columns: Column names
            rows: Data rows, one value per column
            comments: Metadata written before the header, in order

        Returns:
            CSV text ending with a newline
        """
        buffer = io.StringIO()
        for key, value in (comments or {}).items():
            text = _escape_comment(CsvEncoder._encode_value(value))
            buffer.write(f"# {_escape_comment(key)}: {text}\n")

        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                msg = f"Row has {len(row)} values for {len(columns)} columns"
                raise ValueError(msg)
            writer.writerow([CsvEncoder._encode_value(v) for v in row])
        return buffer.getvalue()

    @staticmethod
    def encode_channel_profile(
        cfg: ExperimentConfig,
        profile: AbsorptionProfile,
        time_to_peak: float,
        slot_condition: bool,
    ) -> str:
        """Offsets with raw and ligand-scaled absorption probabilities.

        ``cumulative`` is the absorption CDF G(r, (k+1)τ), the running sum of the raw column.
        """
        cumulative = np.cumsum(profile.raw_probabilities)
        rows = [
            (k, raw, scaled, float(cum))
            for k, (raw, scaled, cum) in enumerate(
                zip(profile.raw_probabilities, profile.probabilities, cumulative, strict=True)
            )
        ]
        comments = {
            "diffusion_coefficient": cfg.channel.diffusion_coefficient,
            "distance": cfg.channel.distance,
            "slot_length": cfg.channel.slot_length,
            "ligand_factor": profile.ligand_factor,
            "time_to_peak": time_to_peak,
            "slot_condition": slot_condition,
            "tail_mass": profile.tail_mass,
            "clamped": profile.clamped,
        }
        return CsvEncoder.encode_table(
            ["offset", "raw_prob", "scaled_prob", "cumulative"], rows, comments
        )

    @staticmethod
    def encode_ber_sweep(
        cfg: ExperimentConfig, rows: Sequence[SweepRow], analytical: Sequence[BerResult]
    ) -> str:
        """One row per sweep point with analytical and empirical BER."""
        paths = [axis.path for axis in cfg.sweep]
        columns = [
            "index",
            *paths,
            "ber_analytical",
            "ber_empirical",
            "ci_halfwidth",
            "sinr",
            "threshold",
            "seed",
        ]
        data = []
        for row, expected in zip(rows, analytical, strict=True):
            result = row.result
            threshold = result.threshold_used
            if threshold is None and result.final_thresholds:
                threshold = result.final_thresholds[0]
            data.append(
                [
                    row.index,
                    *(row.point[path] for path in paths),
                    expected.p_e,
                    result.ber_empirical,
                    result.ci_halfwidth,
                    result.sinr_measured,
                    threshold,
                    result.seed,
                ]
            )
        return CsvEncoder.encode_table(columns, data, CsvEncoder._config_comments(cfg))

    @staticmethod
    def encode_atv_summary(
        cfg: ExperimentConfig,
        atv: SimResult,
        baseline: SimResult,
        analytical_baseline: BerResult,
    ) -> str:
        """Single summary row comparing the ATV receiver with the fixed M/2 receiver."""
        final = atv.final_thresholds[0] if atv.final_thresholds else None
        columns = [
            "ber_atv",
            "ci_atv",
            "ber_fixed_baseline",
            "ci_fixed_baseline",
            "ber_analytical_baseline",
            "sinr",
            "threshold_changes",
            "final_threshold",
            "num_bits",
            "seed",
        ]
        row = [
            atv.ber_empirical,
            atv.ci_halfwidth,
            baseline.ber_empirical,
            baseline.ci_halfwidth,
            analytical_baseline.p_e,
            atv.sinr_measured,
            atv.threshold_changes,
            final,
            atv.num_bits,
            atv.seed,
        ]
        return CsvEncoder.encode_table(columns, [row], CsvEncoder._config_comments(cfg))

    @staticmethod
    def encode_trace(trace: Sequence[float]) -> str:
        """Per-slot threshold trace, slots numbered from 1."""
        return CsvEncoder.encode_table(
            ["slot", "threshold"], [(i + 1, t) for i, t in enumerate(trace)]
        )

    @staticmethod
    def encode_threshold_sweep(
        cfg: ExperimentConfig,
        curve: BerCurve,
        optimum: OptimalThreshold,
        closed_form: float | None,
        mean_optimal: float,
        noise_std_dev: float,
    ) -> str:
        """Analytical error rates over a threshold grid."""
        rows = zip(curve.thresholds, curve.p_e, curve.p_e_zero, curve.p_e_one, strict=True)
        comments = {
            **CsvEncoder._config_comments(cfg),
            "noise_std_dev": noise_std_dev,
            "optimal_threshold": optimum.threshold,
            "optimal_p_e": optimum.p_e,
            "closed_form_threshold": closed_form,
            "mean_optimal_threshold": mean_optimal,
        }
        return CsvEncoder.encode_table(
            ["threshold", "p_e", "p_e_zero", "p_e_one"], [list(r) for r in rows], comments
        )

    @staticmethod
    def _config_comments(cfg: ExperimentConfig) -> dict[str, Any]:
        return {"config": cfg.model_dump_json(exclude={"sweep"})}

    @staticmethod
    def _encode_value(value: Any) -> str:
        """Encode a single cell value.

        Args:
            value: Python or numpy scalar

        Returns:
            Text for the cell
        """
        if value is None:
            return ""
        if isinstance(value, bool | np.bool_):
            return "true" if value else "false"
        if isinstance(value, int | np.integer):
            return str(int(value))
        if isinstance(value, float | np.floating):
            number = float(value)
            if math.isnan(number):
                return "nan"
            if math.isinf(number):
                return "inf" if number > 0 else "-inf"
            return f"{number:.{SIGNIFICANT_DIGITS}g}"
        return str(value)
