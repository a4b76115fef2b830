"""Tests for the molcomm-atv command line."""

import json
from pathlib import Path
from typing import Any

import pytest

from molcomm_atv import cli


def write_config(tmp_path: Path, data: dict[str, Any]) -> Path:
    """Write an experiment JSON file and return its path."""
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def data_lines(text: str) -> list[str]:
    """CSV lines that are not comments."""
    return [line for line in text.splitlines() if not line.startswith("#")]


class TestParser:
    """Test argument parsing."""

    def test_requires_subcommand(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test a bare invocation is a usage error."""
        assert cli.main([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_subcommand(self) -> None:
        """Test an unknown command is a usage error."""
        assert cli.main(["plot"]) == 2

    def test_help_exits_cleanly(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test --help returns 0."""
        assert cli.main(["--help"]) == 0
        assert "channel-profile" in capsys.readouterr().out

    @pytest.mark.parametrize("seed", ["-1", str(2**64), "abc"])
    def test_seed_must_be_u64(self, seed: str) -> None:
        """Test seeds outside [0, 2^64 - 1]."""
        assert cli.main(["channel-profile", "--seed", seed]) == 2

    def test_threshold_sweep_defaults(self) -> None:
        """Test the default threshold grid."""
        args = cli.build_parser().parse_args(["threshold-sweep"])
        assert (args.start, args.stop, args.step) == (50.0, 450.0, 10.0)
        assert args.config is None
        assert args.verbose == 0


class TestChannelProfile:
    """Test the channel-profile command."""

    def test_defaults_to_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the default link is written to stdout."""
        assert cli.main(["channel-profile"]) == 0
        out = capsys.readouterr().out
        lines = data_lines(out)
        assert lines[0] == "offset,raw_prob,scaled_prob,cumulative"
        assert len(lines) == 52
        assert "# slot_condition: true" in out

    def test_max_offset_override(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test --max-offset shortens the table."""
        assert cli.main(["channel-profile", "--max-offset", "5"]) == 0
        assert len(data_lines(capsys.readouterr().out)) == 7

    def test_out_file(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test --out writes the file instead of stdout."""
        out = tmp_path / "profile.csv"
        assert cli.main(["channel-profile", "--out", str(out)]) == 0
        assert capsys.readouterr().out == ""
        assert out.read_text(encoding="utf-8").count("\n") > 50

    def test_verbose_logs_to_stderr(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test -v enables info events on stderr."""
        assert cli.main(["channel-profile", "-v"]) == 0
        assert "profile_built" in capsys.readouterr().err

    def test_missing_config(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test an unreadable config is a configuration error."""
        assert cli.main(["channel-profile", "--config", str(tmp_path / "none.json")]) == 2
        assert "error" in capsys.readouterr().err

    def test_invalid_config(self, tmp_path: Path) -> None:
        """Test a config failing validation."""
        path = write_config(tmp_path, {"channel": {"distance": 0}})
        assert cli.main(["channel-profile", "--config", str(path)]) == 2


class TestBerSweep:
    """Test the ber-sweep command."""

    def test_rows_per_point(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test one row per sweep point with the swept column."""
        path = write_config(
            tmp_path,
            {
                "num_slots": 400,
                "noise": {"std_dev": 40.0},
                "sweep": [{"path": "channel.slot_length", "values": [2.0, 4.0, 6.0]}],
            },
        )
        assert cli.main(["ber-sweep", "--config", str(path), "--seed", "5"]) == 0
        lines = data_lines(capsys.readouterr().out)
        assert lines[0].startswith("index,channel.slot_length,ber_analytical,ber_empirical")
        assert len(lines) == 4
        assert lines[1].startswith("0,2,")

    def test_needs_sweep(self, tmp_path: Path) -> None:
        """Test a config without sweep axes."""
        path = write_config(tmp_path, {"num_slots": 100})
        assert cli.main(["ber-sweep", "--config", str(path)]) == 2

    def test_unreachable_target(self, tmp_path: Path) -> None:
        """Test a target SINR above the ceiling exits with a configuration error."""
        path = write_config(
            tmp_path,
            {
                "num_slots": 100,
                "noise": {"target_sinr": 1e6},
                "sweep": [{"path": "seed", "values": [1]}],
            },
        )
        assert cli.main(["ber-sweep", "--config", str(path)]) == 2


class TestAtvRun:
    """Test the atv-run command."""

    def test_summary_and_trace(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Test the summary row and the per-slot trace file."""
        path = write_config(tmp_path, {"num_slots": 300, "receiver": {"kind": "atv"}})
        trace = tmp_path / "trace.csv"
        assert cli.main(["atv-run", "--config", str(path), "--trace", str(trace)]) == 0

        lines = data_lines(capsys.readouterr().out)
        assert lines[0].split(",")[:3] == ["ber_atv", "ci_atv", "ber_fixed_baseline"]
        assert len(lines) == 2

        trace_lines = trace.read_text(encoding="utf-8").splitlines()
        assert trace_lines[0] == "slot,threshold"
        assert trace_lines[1] == "1,250"
        assert len(trace_lines) == 301

    def test_requires_atv_receiver(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test a fixed receiver config is rejected."""
        path = write_config(tmp_path, {"num_slots": 100})
        assert cli.main(["atv-run", "--config", str(path)]) == 2
        assert "receiver.kind" in capsys.readouterr().err

    def test_clamp_range_without_midpoint(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Test an ATV range excluding M/2 is a configuration error naming the field."""
        path = write_config(
            tmp_path, {"num_slots": 100, "receiver": {"kind": "atv", "threshold_max": 100}}
        )
        assert cli.main(["atv-run", "--config", str(path)]) == 2
        err = capsys.readouterr().err
        assert "receiver" in err
        assert "threshold_max" in err


class TestThresholdSweep:
    """Test the threshold-sweep command."""

    def test_default_grid(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test 50..450 in steps of 10 plus optimum comments."""
        assert cli.main(["threshold-sweep"]) == 0
        out = capsys.readouterr().out
        lines = data_lines(out)
        assert lines[0] == "threshold,p_e,p_e_zero,p_e_one"
        assert len(lines) == 42
        assert lines[1].startswith("50,")
        assert lines[-1].startswith("450,")
        assert "# optimal_threshold: " in out
        assert "# mean_optimal_threshold: 212.23" in out

    def test_custom_grid(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test explicit bounds and step."""
        assert cli.main(["threshold-sweep", "--start", "0", "--stop", "500", "--step", "100"]) == 0
        assert len(data_lines(capsys.readouterr().out)) == 7

    @pytest.mark.parametrize(
        "flags", [["--step", "0"], ["--step", "-5"], ["--start", "300", "--stop", "200"]]
    )
    def test_invalid_grid(self, flags: list[str]) -> None:
        """Test non-positive steps and reversed bounds."""
        assert cli.main(["threshold-sweep", *flags]) == 2


class TestReproducibility:
    """Test repeated runs write identical files."""

    @pytest.mark.parametrize(
        ("command", "config"),
        [
            ("channel-profile", {}),
            (
                "ber-sweep",
                {
                    "num_slots": 300,
                    "num_trials": 2,
                    "sweep": [{"path": "channel.slot_length", "values": [2.0, 4.0]}],
                },
            ),
            ("atv-run", {"num_slots": 300, "num_trials": 2, "receiver": {"kind": "atv"}}),
            ("threshold-sweep", {}),
        ],
    )
    def test_same_seed_same_bytes(
        self, tmp_path: Path, command: str, config: dict[str, Any]
    ) -> None:
        """Test two runs with one config and seed produce byte-identical CSV."""
        path = write_config(tmp_path, config)
        outputs = []
        for attempt in range(2):
            out = tmp_path / f"run{attempt}.csv"
            argv = [command, "--config", str(path), "--seed", "17", "--out", str(out)]
            if command == "atv-run":
                argv += ["--trace", str(tmp_path / f"trace{attempt}.csv")]
            assert cli.main(argv) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        if command == "atv-run":
            first, second = (tmp_path / f"trace{i}.csv" for i in range(2))
            assert first.read_bytes() == second.read_bytes()
