"""Bulb-camera video feedback swept through space to expose a camera's sightfield.

The optical loop is reduced to a scalar map per pose: while the camera sees
the bulb, brightness grows as ``b <- clamp(gain * b + eps, 0, 1)``; while it
does not, brightness decays as ``b <- decay * b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .scan import Acquisition, FieldCloud, ScanPath

ANGLE_EPS = 1e-12  # radians; keeps exactly-on-edge points inside


def _unit(v, name):
    a = np.asarray(v, dtype=float)
    n = np.linalg.norm(a)
    if a.shape != (3,) or not n > 0:
        raise InvalidParameter(f"{name} must be a non-zero 3-vector")
    return a / n


@dataclass(frozen=True)
class CameraModel:
    position: tuple[float, float, float]
    forward: tuple[float, float, float] = (0.0, 0.0, 1.0)
    up: tuple[float, float, float] = (0.0, 1.0, 0.0)
    hfov: float = 40.0  # degrees
    vfov: float = 30.0
    near: float = 0.1
    far: float = 10.0

    def __post_init__(self):
        f = _unit(self.forward, "forward")
        u = _unit(self.up, "up")
        if abs(f @ u) > 1e-9:
            raise InvalidParameter("forward and up must be orthogonal")
        if not (0 < self.hfov < 180 and 0 < self.vfov < 180):
            raise InvalidParameter("fields of view must lie in (0, 180) degrees")
        if not 0 < self.near < self.far:
            raise InvalidParameter("need 0 < near < far")
        object.__setattr__(self, "position", tuple(float(c) for c in self.position))
        object.__setattr__(self, "forward", tuple(f.tolist()))
        object.__setattr__(self, "up", tuple(u.tolist()))

    @property
    def right(self) -> np.ndarray:
        return np.cross(self.forward, self.up)

    def to_camera(self, points) -> np.ndarray:
        """Camera-space ``(right, up, depth)`` coordinates of ``(N, 3)`` points."""
        rel = np.atleast_2d(np.asarray(points, dtype=float)) - np.asarray(self.position)
        basis = np.stack([self.right, np.asarray(self.up), np.asarray(self.forward)])
        return rel @ basis.T


def camera_sees_many(camera: CameraModel, points) -> np.ndarray:
    c = camera.to_camera(points)
    x, y, depth = c[:, 0], c[:, 1], c[:, 2]
    h = np.arctan2(np.abs(x), depth)
    v = np.arctan2(np.abs(y), depth)
    return (
        (depth >= camera.near)
        & (depth <= camera.far)
        & (h <= math.radians(camera.hfov) / 2 + ANGLE_EPS)
        & (v <= math.radians(camera.vfov) / 2 + ANGLE_EPS)
    )


def camera_sees(camera: CameraModel, point) -> bool:
    return bool(camera_sees_many(camera, [point])[0])


@dataclass(frozen=True)
class FeedbackConfig:
    loop_gain: float = 1.5
    ambient_seed: float = 0.01
    decay: float = 0.5
    iterations: int = 100

    def __post_init__(self):
        if not self.loop_gain >= 0:
            raise InvalidParameter("loop_gain must be >= 0")
        if not self.ambient_seed > 0:
            raise InvalidParameter("ambient_seed must be > 0")
        if not 0 <= self.decay < 1:
            raise InvalidParameter("decay must lie in [0, 1)")
        if self.iterations < 0:
            raise InvalidParameter("iterations must be >= 0")


def loop_fixed_point(visible: bool, cfg: FeedbackConfig) -> float:
    b = 0.0
    for _ in range(cfg.iterations):
        if visible:
            b = min(max(cfg.loop_gain * b + cfg.ambient_seed, 0.0), 1.0)
        else:
            b = cfg.decay * b
    return b


def sweep_sightfield(
    camera: CameraModel, path: ScanPath, cfg: FeedbackConfig, seed: int = 0
) -> FieldCloud:
    """Steady-state bulb brightness at every pose, as a real-valued cloud.

    The cloud carries no carrier, so its frequency and medium speed are 0.
    """
    seen = camera_sees_many(camera, path.positions)
    lit, dark = loop_fixed_point(True, cfg), loop_fixed_point(False, cfg)
    values = np.where(seen, lit, dark).astype(complex)
    return FieldCloud(path.positions, values, 0.0, 0.0, Acquisition.IDEAL, seed)
