"""Coherent point sources in a uniform medium and their complex baseband field.

A field value is a Python ``complex`` (a phasor): the real and imaginary
outputs a lock-in amplifier would report at that point. Spatial phase
carries ``exp(-i k r)`` and the carrier is reconstructed with
``exp(+i w t)``, so rotating every phasor by ``exp(+i d)`` moves the wave
fronts away from the sources.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptyScene, InvalidFrequency, InvalidParameter, MixedFrequency

Phasor = complex


class Attenuation(enum.Enum):
    NONE = "none"
    INVERSE_DISTANCE = "inverse_distance"


def _vec3(v, name="position") -> tuple[float, float, float]:
    t = tuple(float(c) for c in v)
    if len(t) != 3:
        raise InvalidParameter(f"{name} must have 3 components, got {len(t)}")
    if not all(math.isfinite(c) for c in t):
        raise InvalidParameter(f"{name} must be finite, got {t}")
    return t


@dataclass(frozen=True)
class Medium:
    speed: float
    attenuation: Attenuation = Attenuation.INVERSE_DISTANCE
    r_min: float = 1e-3

    def __post_init__(self):
        if not (self.speed > 0 and math.isfinite(self.speed)):
            raise InvalidParameter(f"medium speed must be > 0, got {self.speed}")
        if not self.r_min > 0:
            raise InvalidParameter(f"r_min must be > 0, got {self.r_min}")
        object.__setattr__(self, "attenuation", Attenuation(self.attenuation))


@dataclass(frozen=True)
class Source:
    position: tuple[float, float, float]
    frequency: float
    amplitude: float = 1.0
    phase_offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", _vec3(self.position, "source position"))
        if not (self.frequency > 0 and math.isfinite(self.frequency)):
            raise InvalidFrequency(f"frequency must be > 0, got {self.frequency}")
        if not self.amplitude >= 0:
            raise InvalidParameter(f"amplitude must be >= 0, got {self.amplitude}")


@dataclass(frozen=True)
class Scene:
    sources: tuple[Source, ...]
    medium: Medium
    noise_rms: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        if not self.sources:
            raise EmptyScene("a scene needs at least one source")
        freqs = {s.frequency for s in self.sources}
        if len(freqs) > 1:
            raise MixedFrequency(f"all sources must share one frequency, got {sorted(freqs)}")
        if not self.noise_rms >= 0:
            raise InvalidParameter(f"noise_rms must be >= 0, got {self.noise_rms}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameter(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def frequency(self) -> float:
        return self.sources[0].frequency

    @property
    def wavelength(self) -> float:
        return wavelength(self.frequency, self.medium)

    @property
    def wavenumber(self) -> float:
        return 2 * math.pi * self.frequency / self.medium.speed


def wavelength(frequency: float, medium: Medium) -> float:
    if not frequency > 0:
        raise InvalidFrequency(f"frequency must be > 0, got {frequency}")
    return medium.speed / frequency


def baseband_field(scene: Scene, positions) -> np.ndarray:
    """Noise-free phasors at an ``(N, 3)`` array of positions."""
    if not scene.sources:
        raise EmptyScene("a scene needs at least one source")
    pts = np.asarray(positions, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != 3:
        raise InvalidParameter(f"positions must have shape (N, 3), got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidParameter("positions must be finite")

    k = scene.wavenumber
    med = scene.medium
    total = np.zeros(len(pts), dtype=complex)
    for src in scene.sources:
        r = np.linalg.norm(pts - np.asarray(src.position), axis=1)
        r = np.maximum(r, med.r_min)
        term = src.amplitude * np.exp(1j * (src.phase_offset - k * r))
        if med.attenuation is Attenuation.INVERSE_DISTANCE:
            term = term / r
        total += term
    return total[0] if single else total


def baseband_field_at(scene: Scene, position: Sequence[float]) -> Phasor:
    return complex(baseband_field(scene, _vec3(position)))


def time_signal_at(scene: Scene, position, t, rng: np.random.Generator | None = None):
    """Real sensor signal at time(s) ``t``, with additive white Gaussian noise.

    ``t`` may be a scalar or an array. When ``scene.noise_rms`` is zero no
    random numbers are drawn and ``rng`` is ignored; otherwise a generator
    seeded from ``scene.seed`` is used if none is supplied.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise InvalidParameter("time must be >= 0")
    z = baseband_field_at(scene, position)
    x = np.real(z * np.exp(2j * np.pi * scene.frequency * t_arr))
    if scene.noise_rms > 0:
        if rng is None:
            rng = np.random.default_rng(scene.seed)
        x = x + rng.normal(0.0, scene.noise_rms, size=t_arr.shape)
    return float(x) if t_arr.ndim == 0 else x
