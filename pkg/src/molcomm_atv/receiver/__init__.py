"""OOK modem: modulation, fixed-threshold and ATV demodulation."""

from molcomm_atv.receiver.modem import AtvReceiver, atv_step, demod_fixed, demod_frame, modulate

__all__ = ["AtvReceiver", "atv_step", "demod_fixed", "demod_frame", "modulate"]
