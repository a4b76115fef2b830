"""OOK modulation, fixed-threshold demodulation and the adaptive threshold variation receiver."""

import numpy as np
import numpy.typing as npt
import structlog

from molcomm_atv.exceptions import DomainError
from molcomm_atv.models.modulation import ModulationParams
from molcomm_atv.models.receiver import AtvConfig, AtvState

logger = structlog.get_logger()


def modulate(bit: int, mod: ModulationParams) -> int:
    """Molecules emitted for ``bit``: M for 1, none for 0.

    Raises:
        DomainError: If bit is not 0 or 1
    """
    if bit not in (0, 1):
        msg = f"bit must be 0 or 1, got {bit}"
        raise DomainError(msg)
    return mod.molecules_per_one if bit == 1 else 0


def demod_fixed(n_rx: float, threshold: float) -> int:
    """Decode 1 iff n_rx >= threshold."""
    return 1 if n_rx >= threshold else 0


def demod_frame(totals: npt.ArrayLike, threshold: float) -> npt.NDArray[np.int8]:
    """demod_fixed applied to every slot of a frame."""
    return (np.asarray(totals, dtype=np.float64) >= threshold).astype(np.int8)


def atv_step(state: AtvState, n_rx: float, cfg: AtvConfig) -> tuple[int, AtvState]:
    """Decode one slot with the current threshold, then adapt the threshold.

    The decision uses the incoming threshold only. Running sums track the
    receiver's own decisions. Once both symbols have been seen, the threshold
    moves one molecule toward the class whose mean is closer when the gap
    A - B leaves [-μ, μ], with A = N_T - mean(zeros) and B = mean(ones) - N_T.

    Returns:
        Tuple of (decoded bit, next state)
    """
    decoded = demod_fixed(n_rx, state.threshold)

    if cfg.window is None:
        history: tuple[tuple[int, float], ...] = ()
        if decoded == 1:
            count_ones, sum_ones = state.count_ones + 1, state.sum_ones + n_rx
            count_zeros, sum_zeros = state.count_zeros, state.sum_zeros
        else:
            count_zeros, sum_zeros = state.count_zeros + 1, state.sum_zeros + n_rx
            count_ones, sum_ones = state.count_ones, state.sum_ones
    else:
        history = (*state.history, (decoded, float(n_rx)))[-cfg.window :]
        ones = [value for bit, value in history if bit == 1]
        zeros = [value for bit, value in history if bit == 0]
        count_ones, sum_ones = len(ones), float(sum(ones))
        count_zeros, sum_zeros = len(zeros), float(sum(zeros))

    tallied = state.model_copy(
        update={
            "count_ones": count_ones,
            "count_zeros": count_zeros,
            "sum_ones": sum_ones,
            "sum_zeros": sum_zeros,
            "slot_index": state.slot_index + 1,
            "history": history,
        }
    )

    threshold = state.threshold
    mean_zeros, mean_ones = tallied.mean_zeros, tallied.mean_ones
    if mean_zeros is not None and mean_ones is not None:
        imbalance = (threshold - mean_zeros) - (mean_ones - threshold)
        if imbalance > cfg.tolerance:
            threshold -= 1
        elif imbalance < -cfg.tolerance:
            threshold += 1
    threshold = min(max(threshold, cfg.threshold_min), cfg.threshold_max)
    return decoded, tallied.model_copy(update={"threshold": threshold})


class AtvReceiver:
    """Stateful ATV receiver recording the threshold used for every slot."""

    def __init__(self, cfg: AtvConfig) -> None:
        """Initialize the receiver.

        Args:
            cfg: ATV tuning (tolerance, initial threshold, clamp range, window)
        """
        self.cfg = cfg
        self.state = AtvState.initial(cfg)
        self._trace: list[float] = []
        self.threshold_changes = 0

    @property
    def threshold(self) -> float:
        """Threshold that will decode the next slot."""
        return self.state.threshold

    @property
    def threshold_trace(self) -> tuple[float, ...]:
        """N_T(i) used for each slot decoded so far."""
        return tuple(self._trace)

    def step(self, n_rx: float) -> int:
        """Decode one slot and adapt."""
        before = self.state.threshold
        self._trace.append(before)
        decoded, self.state = atv_step(self.state, n_rx, self.cfg)
        if self.state.threshold != before:
            self.threshold_changes += 1
        return decoded

    def run(self, totals: npt.ArrayLike) -> npt.NDArray[np.int8]:
        """Decode a whole frame in order."""
        values = np.asarray(totals, dtype=np.float64)
        decoded = np.fromiter(
            (self.step(float(v)) for v in values), dtype=np.int8, count=values.size
        )
        logger.debug(
            "atv_frame_decoded",
            slots=values.size,
            final_threshold=self.state.threshold,
            changes=self.threshold_changes,
        )
        return decoded
