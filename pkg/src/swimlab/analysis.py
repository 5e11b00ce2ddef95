"""Measurements on scanned clouds: wavelength, propagation speed, fringe spacing."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientFringes, InvalidArgument, NoOscillation
from .render import cloud_is_linear, component_of
from .scan import FieldCloud
from .wavecore import Scene

FAR_FIELD_RATIO = 5.0


@dataclass(frozen=True)
class WaveMeasurement:
    wavelength: float
    cycle_count: float
    speed: float
    relative_error_vs_theory: float | None = None


@dataclass(frozen=True)
class FringeMeasurement:
    spacing: float
    peaks: tuple[float, ...]  # arc-length positions of the magnitude maxima
    near_field: bool | None = None  # None when no scene was given to judge
    predicted: float | None = None


def path_coordinate(cloud: FieldCloud) -> np.ndarray:
    """Arc length of each sample from the first, along a linear path."""
    if len(cloud) < 2 or not cloud_is_linear(cloud):
        raise InvalidArgument("measurement needs a cloud taken along a linear path")
    rel = cloud.positions - cloud.positions[0]
    far = np.argmax(np.linalg.norm(rel, axis=1))
    axis = rel[far] / np.linalg.norm(rel[far])
    return rel @ axis


def zero_crossings(s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Linearly interpolated positions where ``v`` changes sign; zero counts as non-negative."""
    neg = v < 0
    idx = np.nonzero(neg[:-1] != neg[1:])[0]
    v0, v1 = v[idx], v[idx + 1]
    return s[idx] + (s[idx + 1] - s[idx]) * v0 / (v0 - v1)


def extract_wavelength(cloud: FieldCloud, component: str = "re") -> float:
    s = path_coordinate(cloud)
    v = component_of(cloud.values, component)
    v = v - v.mean()
    xs = zero_crossings(s, v)
    if len(xs) < 3:
        raise NoOscillation(f"found {len(xs)} zero crossings, need at least 3")
    return float(2.0 * (xs[-1] - xs[0]) / (len(xs) - 1))


def propagation_speed(wavelength: float, frequency: float) -> float:
    if not (wavelength > 0 and frequency > 0):
        raise InvalidArgument("wavelength and frequency must both be > 0")
    return wavelength * frequency


def theoretical_sound_speed(temperature: float) -> float:
    """Speed of sound in dry air at ``temperature`` degrees Celsius."""
    if not temperature > -273.15:
        raise InvalidArgument(f"temperature {temperature} C is below absolute zero")
    return 331.3 * math.sqrt(1.0 + temperature / 273.15)


def measure_wave(
    cloud: FieldCloud, component: str = "re", theory_speed: float | None = None
) -> WaveMeasurement:
    lam = extract_wavelength(cloud, component)
    s = path_coordinate(cloud)
    speed = propagation_speed(lam, cloud.frequency)
    err = None if theory_speed is None else abs(speed - theory_speed) / theory_speed
    return WaveMeasurement(lam, float((s[-1] - s[0]) / lam), speed, err)


def find_peaks(y: np.ndarray) -> np.ndarray:
    """Indices of strict local maxima; a flat top reports its leftmost sample."""
    peaks = []
    n = len(y)
    i = 1
    while i < n - 1:
        if y[i] > y[i - 1]:
            j = i
            while j + 1 < n and y[j + 1] == y[i]:
                j += 1
            if j + 1 < n and y[j + 1] < y[i]:
                peaks.append(i)
            i = j + 1
        else:
            i += 1
    return np.asarray(peaks, dtype=int)


def smooth3(y: np.ndarray) -> np.ndarray:
    """Three-point moving average; endpoints average over their two available samples."""
    out = np.empty_like(y, dtype=float)
    out[1:-1] = (y[:-2] + y[1:-1] + y[2:]) / 3.0
    out[0] = (y[0] + y[1]) / 2.0
    out[-1] = (y[-1] + y[-2]) / 2.0
    return out


def predicted_fringe_spacing(wavelength: float, distance: float, separation: float) -> float:
    if not (wavelength > 0 and distance > 0 and separation > 0):
        raise InvalidArgument("wavelength, distance and separation must be > 0")
    return wavelength * distance / separation


def baseline_geometry(scene: Scene, cloud: FieldCloud) -> tuple[float, float]:
    """Source separation and distance from the source midpoint to the scan line."""
    if len(scene.sources) != 2:
        raise InvalidArgument(f"fringe geometry needs 2 sources, got {len(scene.sources)}")
    a, b = (np.asarray(s.position) for s in scene.sources)
    d = float(np.linalg.norm(b - a))
    mid = (a + b) / 2
    p0 = cloud.positions[0]
    rel = cloud.positions - p0
    far = np.argmax(np.linalg.norm(rel, axis=1))
    axis = rel[far] / np.linalg.norm(rel[far])
    w = mid - p0
    L = float(np.linalg.norm(w - (w @ axis) * axis))
    return d, L


def fringe_spacing(cloud: FieldCloud, scene: Scene | None = None) -> FringeMeasurement:
    """Mean distance between neighbouring magnitude maxima along a linear scan.

    With ``scene`` given, the result also carries the far-field prediction
    and flags scans closer than five source separations as near field.
    """
    s = path_coordinate(cloud)
    order = np.argsort(s, kind="stable")
    s = s[order]
    mag = smooth3(np.abs(cloud.values[order]))
    idx = find_peaks(mag)
    if len(idx) < 2:
        raise InsufficientFringes(f"found {len(idx)} magnitude peaks, need at least 2")
    peaks = s[idx]
    spacing = float((peaks[-1] - peaks[0]) / (len(peaks) - 1))
    near = predicted = None
    if scene is not None:
        d, L = baseline_geometry(scene, cloud)
        near = L < FAR_FIELD_RATIO * d
        predicted = predicted_fringe_spacing(scene.wavelength, L, d)
    return FringeMeasurement(spacing, tuple(float(p) for p in peaks), near, predicted)
