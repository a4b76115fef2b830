"""Tests for the seeded Monte Carlo engine and sweeps."""

import numpy as np
import pytest
from structlog.testing import capture_logs

from molcomm_atv.exceptions import ConfigurationError, DomainError, SimulationError
from molcomm_atv.models.experiment import ExperimentConfig
from molcomm_atv.models.modulation import NoiseParams
from molcomm_atv.physics.diffusion import build_profile
from molcomm_atv.simulation import (
    THREADS_ENV_VAR,
    TrialPool,
    analytical_ber,
    point_seed,
    resolve_noise,
    resolve_workers,
    run_experiment,
    run_sweep,
    run_trial,
    sweep_points,
    trial_generator,
)


def small_config(**fields: object) -> ExperimentConfig:
    """Short frames so the engine tests stay fast."""
    data: dict[str, object] = {"num_slots": 2_000, "seed": 1234}
    data.update(fields)
    return ExperimentConfig.model_validate(data)


class TestSeeding:
    """Test random stream derivation."""

    def test_point_seed_is_deterministic(self) -> None:
        """Test equal inputs give equal seeds."""
        assert point_seed(7, 3) == point_seed(7, 3)
        assert point_seed(7, 3) != point_seed(7, 4)
        assert point_seed(7, 3) != point_seed(8, 3)

    def test_point_seeds_distinct(self) -> None:
        """Test ten thousand points get distinct u64 seeds."""
        seeds = [point_seed(2024, i) for i in range(10_000)]
        assert len(set(seeds)) == len(seeds)
        assert all(0 <= s < 2**64 for s in seeds)

    def test_trial_generators(self) -> None:
        """Test trials draw independent but reproducible streams."""
        a = trial_generator(5, 0).random(4)
        b = trial_generator(5, 0).random(4)
        c = trial_generator(5, 1).random(4)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)


class TestResolveWorkers:
    """Test worker count resolution."""

    def test_environment_wins(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test the environment variable overrides the config."""
        monkeypatch.setenv(THREADS_ENV_VAR, "3")
        assert resolve_workers(8, 10) == 3

    def test_config_then_cpu_count(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test the config value is used without the environment."""
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        assert resolve_workers(2, 10) == 2
        assert resolve_workers(None, 10) >= 1

    def test_capped_at_trials(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test no more workers than trials."""
        monkeypatch.setenv(THREADS_ENV_VAR, "16")
        assert resolve_workers(None, 2) == 2

    @pytest.mark.parametrize("raw", ["zero", "0", "-2"])
    def test_invalid_environment(self, monkeypatch: pytest.MonkeyPatch, raw: str) -> None:
        """Test non-positive or non-numeric values."""
        monkeypatch.setenv(THREADS_ENV_VAR, raw)
        with pytest.raises(ConfigurationError) as excinfo:
            resolve_workers(None, 4)
        assert excinfo.value.key == THREADS_ENV_VAR


class TestTrialPool:
    """Test the bounded trial pool."""

    @pytest.mark.parametrize("workers", [1, 4])
    def test_results_in_index_order(self, workers: int) -> None:
        """Test gathering preserves index order."""
        assert TrialPool(workers).run(lambda i: i * i, 6) == [0, 1, 4, 9, 16, 25]

    def test_wraps_unexpected_errors(self) -> None:
        """Test non-library exceptions become SimulationError."""

        def task(i: int) -> int:
            if i == 2:
                msg = "boom"
                raise RuntimeError(msg)
            return i

        with pytest.raises(SimulationError) as excinfo:
            TrialPool(2).run(task, 4)
        assert excinfo.value.trial == 2

    def test_library_errors_pass_through(self) -> None:
        """Test MolcommError subclasses are not wrapped."""

        def task(i: int) -> int:
            msg = "bad"
            raise DomainError(msg)

        with pytest.raises(DomainError):
            TrialPool(1).run(task, 1)


class TestRunExperiment:
    """Test single-configuration runs."""

    def test_deterministic(self) -> None:
        """Test equal configs give identical results."""
        cfg = small_config(noise={"std_dev": 60.0})
        assert run_experiment(cfg) == run_experiment(cfg)

    def test_seed_changes_outcome(self) -> None:
        """Test different seeds draw different frames."""
        a = run_experiment(small_config(noise={"std_dev": 60.0}, seed=1))
        b = run_experiment(small_config(noise={"std_dev": 60.0}, seed=2))
        assert a.sinr_measured != b.sinr_measured

    def test_independent_of_thread_count(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test one and four threads give identical results."""
        cfg = small_config(num_slots=500, num_trials=4, receiver={"kind": "atv"})
        monkeypatch.setenv(THREADS_ENV_VAR, "1")
        single = run_experiment(cfg)
        monkeypatch.setenv(THREADS_ENV_VAR, "4")
        assert run_experiment(cfg) == single

    def test_clean_channel_has_no_errors(self) -> None:
        """Test a short link with no noise decodes perfectly."""
        cfg = small_config(
            channel={"diffusion_coefficient": 10.0, "distance": 1.0, "slot_length": 10.0},
            noise={"std_dev": 0.0},
        )
        result = run_experiment(cfg)
        assert result.total_errors == 0
        assert result.ber_empirical == 0.0
        assert result.ci_halfwidth == 0.0

    def test_fixed_receiver_fields(self) -> None:
        """Test fixed runs report their threshold and no trace."""
        result = run_experiment(small_config(noise={"std_dev": 60.0}, num_trials=2))
        assert result.threshold_used == 250.0
        assert result.threshold_trace == ()
        assert result.final_thresholds == ()
        assert result.num_bits == 4_000
        assert result.seed == 1234
        assert result.errors_one + result.errors_zero == result.total_errors

    def test_atv_receiver_fields(self) -> None:
        """Test ATV runs keep the trial-0 trace and per-trial final thresholds."""
        result = run_experiment(
            small_config(noise={"std_dev": 60.0}, num_trials=3, receiver={"kind": "atv"})
        )
        assert result.threshold_used is None
        assert len(result.threshold_trace) == 2_000
        assert result.threshold_trace[0] == 250.0
        assert len(result.final_thresholds) == 3

    def test_per_bit_rates_use_sent_counts(self) -> None:
        """Test ber_zero and ber_one divide by the zeros and ones sent across trials."""
        cfg = small_config(bit_pattern="alternating", noise={"std_dev": 90.0}, num_trials=2)
        result = run_experiment(cfg)
        assert result.ber_zero == result.errors_zero / 2_000
        assert result.ber_one == result.errors_one / 2_000

    def test_completion_event_reports_sinr_db(self) -> None:
        """Test the completion log carries the measured γ_e in dB."""
        with capture_logs() as logs:
            result = run_experiment(small_config(noise={"std_dev": 60.0}))
        events = [e for e in logs if e["event"] == "run_experiment_complete"]
        assert len(events) == 1
        assert events[0]["sinr_db"] == result.sinr_db

    def test_target_sinr_resolves_noise(self) -> None:
        """Test the σ in the result is the one reaching the target γ_e."""
        cfg = small_config()
        profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset)
        assert run_experiment(cfg).noise_std_dev == resolve_noise(cfg, profile).std_dev

    def test_unreachable_target_propagates(self) -> None:
        """Test a target above the ceiling fails before simulating."""
        with pytest.raises(DomainError):
            run_experiment(small_config(noise={"target_sinr": 1000.0}))

    def test_empirical_matches_analytical(self) -> None:
        """Test BER at γ_e = 10 lies within four standard errors of the model."""
        cfg = small_config(num_slots=20_000)
        result = run_experiment(cfg)
        expected = analytical_ber(cfg).p_e
        se = np.sqrt(expected * (1 - expected) / result.num_bits)
        assert abs(result.ber_empirical - expected) <= 4 * se

    @pytest.mark.slow
    def test_measured_sinr_near_target(self) -> None:
        """Test the measured γ_e lands within 5% of the target."""
        result = run_experiment(small_config(num_slots=50_000))
        assert result.sinr_measured == pytest.approx(10.0, rel=0.05)


class TestRunTrial:
    """Test single frames."""

    def test_alternating_pattern(self) -> None:
        """Test the deterministic pattern sends exactly half ones."""
        cfg = small_config(bit_pattern="alternating", noise={"std_dev": 10.0})
        profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset)
        outcome = run_trial(cfg, profile, NoiseParams(std_dev=10.0), 0)
        assert outcome.ones_sent == 1_000
        assert outcome.zeros_sent == 1_000

    def test_lagged_receiver_runs(self) -> None:
        """Test a positive receive lag simulates next-bit ISI."""
        cfg = small_config(receive_lag=1, noise={"std_dev": 30.0, "isi_term": "next"})
        profile = build_profile(cfg.channel, cfg.ligand, cfg.max_offset)
        outcome = run_trial(cfg, profile, NoiseParams(std_dev=30.0), 0)
        assert outcome.isi_power_sum > 0


class TestSweep:
    """Test parameter sweeps."""

    def test_points_cartesian_product(self) -> None:
        """Test the first axis varies slowest."""
        cfg = small_config(
            sweep=[
                {"path": "channel.distance", "values": [2.0, 4.0]},
                {"path": "noise.std_dev", "values": [10.0, 20.0, 30.0]},
            ]
        )
        points = sweep_points(cfg)
        assert len(points) == 6
        assert points[0] == {"channel.distance": 2.0, "noise.std_dev": 10.0}
        assert points[1] == {"channel.distance": 2.0, "noise.std_dev": 20.0}
        assert points[3] == {"channel.distance": 4.0, "noise.std_dev": 10.0}

    def test_single_point_matches_experiment(self) -> None:
        """Test point i runs with the derived seed."""
        cfg = small_config(
            num_slots=500, sweep=[{"path": "channel.slot_length", "values": [2.0]}]
        )
        rows = run_sweep(cfg)
        direct = run_experiment(
            cfg.with_values({"channel.slot_length": 2.0, "seed": point_seed(1234, 0)})
        )
        assert len(rows) == 1
        assert rows[0].index == 0
        assert rows[0].point == {"channel.slot_length": 2.0}
        assert rows[0].result == direct
        assert rows[0].result.seed == point_seed(1234, 0)

    def test_points_get_distinct_seeds(self) -> None:
        """Test each point runs on its own stream."""
        cfg = small_config(
            num_slots=300, sweep=[{"path": "noise.std_dev", "values": [40.0, 40.0]}]
        )
        rows = run_sweep(cfg)
        assert rows[0].result.seed != rows[1].result.seed

    def test_empty_sweep(self) -> None:
        """Test a config with no axes."""
        with pytest.raises(ConfigurationError) as excinfo:
            sweep_points(small_config())
        assert excinfo.value.key == "sweep"

    def test_duplicate_path(self) -> None:
        """Test an axis repeated twice."""
        cfg = small_config(
            sweep=[
                {"path": "channel.distance", "values": [2.0]},
                {"path": "channel.distance", "values": [4.0]},
            ]
        )
        with pytest.raises(ConfigurationError) as excinfo:
            sweep_points(cfg)
        assert excinfo.value.key == "channel.distance"

    def test_empty_axis(self) -> None:
        """Test an axis without values."""
        cfg = small_config(sweep=[{"path": "channel.distance", "values": []}])
        with pytest.raises(ConfigurationError) as excinfo:
            sweep_points(cfg)
        assert excinfo.value.key == "channel.distance"

    def test_unknown_path(self) -> None:
        """Test an axis naming no config field."""
        cfg = small_config(sweep=[{"path": "channel.width", "values": [1.0]}])
        with pytest.raises(ConfigurationError) as excinfo:
            sweep_points(cfg)
        assert excinfo.value.key == "channel.width"
