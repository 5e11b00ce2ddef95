"""Scan paths, acquisition, and the ``swimcloud v1`` point-cloud format."""

from __future__ import annotations

import enum
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import lockin
from .errors import (
    DegeneratePath,
    InvalidExtent,
    InvalidParameter,
    NotSettled,
    ReferenceMismatch,
)
from .lockin import LockInConfig
from .wavecore import Scene, baseband_field, baseband_field_at

CLOUD_MAGIC = "swimcloud v1"
COLLINEAR_TOL = 1e-9


class PathKind(enum.Enum):
    LINEAR = "linear"
    RASTER2D = "raster2d"
    RASTER3D = "raster3d"


class Acquisition(enum.Enum):
    IDEAL = "Ideal"
    LOCKIN = "LockIn"


@dataclass(frozen=True)
class SamplePose:
    position: tuple[float, float, float]
    dwell: float


@dataclass(frozen=True, eq=False)
class ScanPath:
    positions: np.ndarray
    dwells: np.ndarray
    kind: PathKind

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        dw = np.broadcast_to(np.asarray(self.dwells, dtype=float), (len(pos),)).copy()
        if len(pos) < 2:
            raise DegeneratePath(f"a path needs at least 2 poses, got {len(pos)}")
        if not np.all(np.isfinite(pos)):
            raise InvalidParameter("path positions must be finite")
        if not np.all(dw > 0):
            raise InvalidParameter("dwell times must be > 0")
        if self.kind is PathKind.LINEAR and not is_collinear(pos, COLLINEAR_TOL):
            raise DegeneratePath("linear path poses are not collinear")
        pos.flags.writeable = False
        dw.flags.writeable = False
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "dwells", dw)

    def __len__(self):
        return len(self.positions)

    def __iter__(self) -> Iterator[SamplePose]:
        for p, d in zip(self.positions, self.dwells):
            yield SamplePose(tuple(float(c) for c in p), float(d))

    @property
    def poses(self) -> list[SamplePose]:
        return list(self)


def is_collinear(points, tol: float) -> bool:
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        return True
    far = np.argmax(np.linalg.norm(pts - pts[0], axis=1))
    axis = pts[far] - pts[0]
    length = np.linalg.norm(axis)
    if length == 0:
        return True
    rel = pts - pts[0]
    perp = rel - np.outer(rel @ axis / length**2, axis)
    return bool(np.max(np.linalg.norm(perp, axis=1)) <= tol)


def linear_path(start, end, n: int, dwell: float) -> ScanPath:
    if n < 2:
        raise DegeneratePath(f"n must be >= 2, got {n}")
    a = np.asarray(start, dtype=float)
    b = np.asarray(end, dtype=float)
    if np.array_equal(a, b):
        raise DegeneratePath("start and end coincide")
    pos = np.linspace(a, b, n)
    return ScanPath(pos, dwell, PathKind.LINEAR)


def _axis_values(lo: float, hi: float, count: int, name: str) -> np.ndarray:
    if count < 1:
        raise InvalidExtent(f"{name} count must be >= 1, got {count}")
    if count == 1:
        return np.array([lo])
    if hi == lo:
        raise InvalidExtent(f"{name} extent is zero but {count} samples requested")
    return np.linspace(lo, hi, count)


def raster_path(min_corner, max_corner, counts, dwell: float) -> ScanPath:
    """Serpentine raster: x fastest, then y, then z.

    Every row reverses x direction (continuing across planes) and every plane
    reverses y direction, so consecutive poses are always grid neighbours.
    """
    lo = np.asarray(min_corner, dtype=float)
    hi = np.asarray(max_corner, dtype=float)
    nx, ny, nz = (int(c) for c in counts)
    if np.any(hi < lo):
        raise InvalidExtent(f"max_corner {hi.tolist()} below min_corner {lo.tolist()}")
    if nx * ny * nz < 2:
        raise DegeneratePath("a raster needs at least 2 poses")
    xs = _axis_values(lo[0], hi[0], nx, "x")
    ys = _axis_values(lo[1], hi[1], ny, "y")
    zs = _axis_values(lo[2], hi[2], nz, "z")

    pos = np.empty((nx * ny * nz, 3))
    row = 0
    i = 0
    for k, z in enumerate(zs):
        for y in (ys if k % 2 == 0 else ys[::-1]):
            for x in (xs if row % 2 == 0 else xs[::-1]):
                pos[i] = (x, y, z)
                i += 1
            row += 1
    kind = PathKind.RASTER3D if nz > 1 else PathKind.RASTER2D
    return ScanPath(pos, dwell, kind)


@dataclass(frozen=True, eq=False)
class FieldCloud:
    positions: np.ndarray
    values: np.ndarray
    frequency: float
    medium_speed: float
    acquisition: Acquisition = Acquisition.IDEAL
    seed: int = 0

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float).reshape(-1, 3)
        val = np.array(self.values, dtype=complex).reshape(-1)
        if len(pos) < 1:
            raise InvalidParameter("a cloud needs at least one sample")
        if len(pos) != len(val):
            raise InvalidParameter(f"{len(pos)} positions but {len(val)} values")
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(val))):
            raise InvalidParameter("cloud positions and phasors must be finite")
        if len(np.unique(pos, axis=0)) != len(pos):
            raise InvalidParameter("cloud positions must be unique")
        pos.flags.writeable = False
        val.flags.writeable = False
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "values", val)
        object.__setattr__(self, "acquisition", Acquisition(self.acquisition))

    def __len__(self):
        return len(self.values)

    def with_values(self, values) -> "FieldCloud":
        return FieldCloud(
            self.positions, values, self.frequency, self.medium_speed, self.acquisition, self.seed
        )

    def __eq__(self, other):
        if not isinstance(other, FieldCloud):
            return NotImplemented
        return (
            np.array_equal(self.positions, other.positions)
            and np.array_equal(self.values, other.values)
            and self.frequency == other.frequency
            and self.medium_speed == other.medium_speed
            and self.acquisition == other.acquisition
            and self.seed == other.seed
        )

    __hash__ = None


def acquire_ideal(scene: Scene, path: ScanPath) -> FieldCloud:
    values = baseband_field(scene, path.positions)
    return FieldCloud(
        path.positions, values, scene.frequency, scene.medium.speed, Acquisition.IDEAL, scene.seed
    )


def pose_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator per pose so results do not depend on scheduling."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def measure_pose(scene: Scene, position, dwell: float, cfg: LockInConfig, index: int) -> complex:
    n = lockin.dwell_samples(dwell, cfg)
    need = lockin.settle_samples(cfg)
    if n < need:
        raise NotSettled(
            f"pose {index}: dwell {dwell} s gives {n} samples, filter needs {need}"
        )
    z = baseband_field_at(scene, position)
    t = np.arange(n) / cfg.sample_rate
    x = np.real(z * np.exp(2j * np.pi * scene.frequency * t))
    if scene.noise_rms > 0:
        x = x + pose_rng(scene.seed, index).normal(0.0, scene.noise_rms, size=n)
    return lockin.demodulate(x, cfg)


def acquire_lockin(
    scene: Scene, path: ScanPath, cfg: LockInConfig, workers: int = 1
) -> FieldCloud:
    """Lock-in acquisition of every pose; each dwell restarts the reference at t=0."""
    if not math.isclose(cfg.reference_frequency, scene.frequency, rel_tol=1e-12):
        raise ReferenceMismatch(
            f"lock-in reference {cfg.reference_frequency} Hz != scene {scene.frequency} Hz"
        )
    need = lockin.settle_samples(cfg)
    for i, d in enumerate(path.dwells):
        if lockin.dwell_samples(d, cfg) < need:
            raise NotSettled(f"pose {i}: dwell {d} s is shorter than the settling time")

    jobs = [(p, d, i) for i, (p, d) in enumerate(zip(path.positions, path.dwells))]

    def run(job):
        p, d, i = job
        return measure_pose(scene, p, d, cfg, i)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(run, jobs))
    else:
        values = [run(j) for j in jobs]
    return FieldCloud(
        path.positions, values, scene.frequency, scene.medium.speed, Acquisition.LOCKIN, scene.seed
    )


def _fmt(v: float) -> str:
    # +0.0 folds negative zero so output does not depend on rounding direction
    return format(float(v) + 0.0, ".9g")


def format_cloud(cloud: FieldCloud) -> str:
    out = io.StringIO()
    out.write(CLOUD_MAGIC + "\n")
    out.write(
        f"frequency={float(cloud.frequency)!r} speed={float(cloud.medium_speed)!r} "
        f"acquisition={cloud.acquisition.value} seed={int(cloud.seed)} n={len(cloud)}\n"
    )
    for (x, y, z), v in zip(cloud.positions, cloud.values):
        out.write(" ".join(_fmt(c) for c in (x, y, z, v.real, v.imag)) + "\n")
    return out.getvalue()


def parse_cloud(text: str) -> FieldCloud:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != CLOUD_MAGIC:
        raise InvalidParameter(f"not a swimcloud file: expected header {CLOUD_MAGIC!r}")
    if len(lines) < 2:
        raise InvalidParameter("swimcloud file is missing its metadata line")
    meta = {}
    for tok in lines[1].split():
        key, sep, val = tok.partition("=")
        if not sep:
            raise InvalidParameter(f"malformed metadata token {tok!r}")
        meta[key] = val
    missing = {"frequency", "speed", "acquisition", "seed", "n"} - meta.keys()
    if missing:
        raise InvalidParameter(f"swimcloud metadata missing {sorted(missing)}")
    n = int(meta["n"])
    rows = lines[2:]
    if len(rows) != n:
        raise InvalidParameter(f"header says n={n} but file has {len(rows)} samples")
    data = np.array([[float(c) for c in r.split()] for r in rows], dtype=float).reshape(-1, 5)
    return FieldCloud(
        data[:, :3],
        data[:, 3] + 1j * data[:, 4],
        float(meta["frequency"]),
        float(meta["speed"]),
        Acquisition(meta["acquisition"]),
        int(meta["seed"]),
    )


def write_cloud(cloud: FieldCloud, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_cloud(cloud))


def read_cloud(path: str | os.PathLike) -> FieldCloud:
    with open(path, encoding="ascii", newline="") as fh:
        return parse_cloud(fh.read())
