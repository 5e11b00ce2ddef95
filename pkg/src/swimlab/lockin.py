"""Simulated lock-in amplifier.

Synchronous I/Q mixing against a known reference, followed by a single-pole
low-pass (exponential moving average) on each channel. Both mixers carry a
gain of 2 so ``A cos(w t + phi)`` demodulates to ``A exp(i phi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import AliasingRisk, InvalidParameter, NotSettled

MIXER_GAIN = 2.0
MIN_OVERSAMPLING = 10.0
MIN_SETTLE_FACTOR = 5.0


@dataclass(frozen=True)
class LockInConfig:
    reference_frequency: float
    sample_rate: float = 200e3
    time_constant: float = 5e-3
    settle_factor: float = 5.0

    def __post_init__(self):
        if not self.reference_frequency > 0:
            raise InvalidParameter(
                f"reference_frequency must be > 0, got {self.reference_frequency}"
            )
        if not self.sample_rate >= MIN_OVERSAMPLING * self.reference_frequency:
            raise AliasingRisk(
                f"sample_rate {self.sample_rate} Hz is below 10x the reference "
                f"frequency {self.reference_frequency} Hz"
            )
        if not self.time_constant >= 10.0 / self.sample_rate:
            raise InvalidParameter(
                f"time_constant must span at least 10 samples, got {self.time_constant} s"
            )
        if not self.settle_factor >= MIN_SETTLE_FACTOR:
            raise InvalidParameter(f"settle_factor must be >= 5, got {self.settle_factor}")

    @property
    def alpha(self) -> float:
        """Smoothing coefficient of the EMA, ``1 - exp(-1/(tau fs))``."""
        return -math.expm1(-1.0 / (self.time_constant * self.sample_rate))

    @property
    def gain_convention(self) -> float:
        return MIXER_GAIN


def settle_samples(cfg: LockInConfig) -> int:
    # round first so 5 * 5ms * 200kHz is 5000, not 5001 from float noise
    return math.ceil(round(cfg.settle_factor * cfg.time_constant * cfg.sample_rate, 9))


def default_dwell(cfg: LockInConfig) -> float:
    """Shortest dwell honoring the settling contract, plus one output sample."""
    return (settle_samples(cfg) + 1) / cfg.sample_rate


def dwell_samples(dwell: float, cfg: LockInConfig) -> int:
    return int(math.floor(dwell * cfg.sample_rate + 1e-6))


def lowpass(x, cfg: LockInConfig) -> np.ndarray:
    a = cfg.alpha
    return lfilter([a], [1.0, a - 1.0], x)


def mix(samples, cfg: LockInConfig) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(samples, dtype=float)
    wt = 2 * np.pi * cfg.reference_frequency * (np.arange(len(x)) / cfg.sample_rate)
    return MIXER_GAIN * x * np.cos(wt), -MIXER_GAIN * x * np.sin(wt)


def demodulate_trace(samples, cfg: LockInConfig) -> np.ndarray:
    """Complex filter output at every sample (no settling check)."""
    i, q = mix(samples, cfg)
    return lowpass(i, cfg) + 1j * lowpass(q, cfg)


def demodulate(samples, cfg: LockInConfig) -> complex:
    """Phasor of ``samples`` at the reference frequency, read at the last sample.

    The reference phase is zero at the first sample.
    """
    if cfg.sample_rate < MIN_OVERSAMPLING * cfg.reference_frequency:
        raise AliasingRisk("sample_rate below 10x reference frequency")
    n = len(samples)
    need = settle_samples(cfg)
    if n < need:
        raise NotSettled(f"{n} samples given, filter needs at least {need} to settle")
    i, q = mix(samples, cfg)
    return complex(lowpass(i, cfg)[-1], lowpass(q, cfg)[-1])
