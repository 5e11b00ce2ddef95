"""Phase-coloured rendering of field clouds.

Phase sets hue (0 rad is pure red, increasing through green at 2pi/3 and
blue at 4pi/3), magnitude sets brightness, saturation is always 1.
"""

from __future__ import annotations

import enum
import math
import os
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyFrame, InvalidParameter, PathKindMismatch
from .scan import FieldCloud, is_collinear

PLANES = {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}


class Exposure(enum.Enum):
    ADDITIVE = "additive"
    MAX = "max"


@dataclass(frozen=True)
class RenderConfig:
    width: int
    height: int
    extent: tuple[float, float, float, float]  # (u_min, u_max, v_min, v_max), meters
    plane: str = "xy"
    exposure: Exposure = Exposure.ADDITIVE
    normalization: str | float = "global_max"  # or a fixed positive scale
    splat_radius: int = 1

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidParameter("width and height must be >= 1")
        if self.plane not in PLANES:
            raise InvalidParameter(f"plane must be one of {sorted(PLANES)}, got {self.plane!r}")
        ext = tuple(float(e) for e in self.extent)
        if len(ext) != 4 or not (ext[1] > ext[0] and ext[3] > ext[2]):
            raise InvalidParameter(f"extent must be (u_min, u_max, v_min, v_max) positive, got {ext}")
        object.__setattr__(self, "extent", ext)
        object.__setattr__(self, "exposure", Exposure(self.exposure))
        if isinstance(self.normalization, str):
            if self.normalization != "global_max":
                raise InvalidParameter(f"unknown normalization {self.normalization!r}")
        elif not self.normalization > 0:
            raise InvalidParameter("fixed normalization must be > 0")
        if self.splat_radius < 0:
            raise InvalidParameter("splat_radius must be >= 0")

    @property
    def meters_per_pixel(self) -> tuple[float, float]:
        u0, u1, v0, v1 = self.extent
        return (u1 - u0) / self.width, (v1 - v0) / self.height


def grid_extent(lo_u: float, hi_u: float, nu: int, lo_v: float, hi_v: float, nv: int):
    """Extent that puts each node of an inclusive ``nu x nv`` grid on its own pixel centre."""
    du = (hi_u - lo_u) / (nu - 1) if nu > 1 else 1.0
    dv = (hi_v - lo_v) / (nv - 1) if nv > 1 else 1.0
    return (lo_u - du / 2, hi_u + du / 2, lo_v - dv / 2, hi_v + dv / 2)


@dataclass(frozen=True, eq=False)
class Image:
    pixels: np.ndarray  # (height, width, 3) uint8, row 0 at the top

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes()

    def to_png(self) -> bytes:
        raw = b"".join(b"\x00" + row.tobytes() for row in self.pixels.astype(np.uint8))

        def chunk(tag: bytes, data: bytes) -> bytes:
            body = tag + data
            return struct.pack(">I", len(data)) + body + struct.pack(">I", zlib.crc32(body))

        ihdr = struct.pack(">IIBBBBB", self.width, self.height, 8, 2, 0, 0, 0)
        return (
            b"\x89PNG\r\n\x1a\n"
            + chunk(b"IHDR", ihdr)
            + chunk(b"IDAT", zlib.compress(raw, 9))
            + chunk(b"IEND", b"")
        )

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        data = self.to_png() if path.suffix.lower() == ".png" else self.to_ppm()
        path.write_bytes(data)


def read_ppm(path: str | os.PathLike) -> Image:
    data = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        end = pos
        while not data[end : end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    if tokens[0] != b"P6" or int(tokens[3]) != 255:
        raise InvalidParameter("only binary P6 PPM with maxval 255 is supported")
    w, h = int(tokens[1]), int(tokens[2])
    body = data[pos + 1 : pos + 1 + w * h * 3]
    return Image(np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3).copy())


def hsv_to_rgb8(hue: np.ndarray, value: np.ndarray) -> np.ndarray:
    """Fully saturated HSV to 8-bit RGB; ``hue`` in turns ``[0, 1)``, ``value`` in ``[0, 1]``."""
    h6 = np.mod(hue, 1.0) * 6.0
    sector = np.floor(h6).astype(int) % 6
    f = h6 - np.floor(h6)
    v = value
    rising = v * f
    falling = v * (1.0 - f)
    zero = np.zeros_like(v)
    r = np.choose(sector, [v, falling, zero, zero, rising, v])
    g = np.choose(sector, [rising, v, v, falling, zero, zero])
    b = np.choose(sector, [zero, zero, rising, v, v, falling])
    rgb = np.stack([r, g, b], axis=-1)
    return np.floor(rgb * 255.0 + 0.5).astype(np.uint8)


def phasors_to_rgb(values, norm: float) -> np.ndarray:
    z = np.asarray(values, dtype=complex)
    hue = np.mod(np.angle(z), 2 * np.pi) / (2 * np.pi)
    brightness = np.clip(np.abs(z) / norm, 0.0, 1.0)
    return hsv_to_rgb8(hue, brightness)


def phasor_to_rgb(value: complex, norm: float) -> tuple[int, int, int]:
    if not norm > 0:
        raise InvalidParameter(f"norm must be > 0, got {norm}")
    r, g, b = phasors_to_rgb(np.array([value]), norm)[0]
    return int(r), int(g), int(b)


def _norm_scale(values: np.ndarray, cfg: RenderConfig) -> float:
    if cfg.normalization == "global_max":
        m = float(np.max(np.abs(values))) if len(values) else 0.0
        return m if m > 0 else 1.0
    return float(cfg.normalization)


def _splat_offsets(radius: int) -> np.ndarray:
    r = int(radius)
    d = np.arange(-r, r + 1)
    dy, dx = np.meshgrid(d, d, indexing="ij")
    keep = dx * dx + dy * dy <= r * r
    return np.stack([dy[keep], dx[keep]], axis=1)


def project(positions, cfg: RenderConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pixel (row, col) of each position and a mask of those inside the extent."""
    iu, iv = PLANES[cfg.plane]
    pos = np.asarray(positions, dtype=float)
    u, v = pos[:, iu], pos[:, iv]
    u0, u1, v0, v1 = cfg.extent
    du, dv = cfg.meters_per_pixel
    inside = (u >= u0) & (u <= u1) & (v >= v0) & (v <= v1)
    col = np.clip(np.floor((u - u0) / du), 0, cfg.width - 1).astype(int)
    row = np.clip(np.floor((v1 - v) / dv), 0, cfg.height - 1).astype(int)
    return row, col, inside


def _rasterize_values(positions, values, norm: float, cfg: RenderConfig) -> Image:
    row, col, inside = project(positions, cfg)
    if not np.any(inside):
        raise EmptyFrame("no sample falls inside the render extent")
    rgb = phasors_to_rgb(values[inside], norm).astype(np.int64)
    row, col = row[inside], col[inside]

    acc = np.zeros((cfg.height, cfg.width, 3), dtype=np.int64)
    for dy, dx in _splat_offsets(cfg.splat_radius):
        rr, cc = row + dy, col + dx
        ok = (rr >= 0) & (rr < cfg.height) & (cc >= 0) & (cc < cfg.width)
        if cfg.exposure is Exposure.ADDITIVE:
            np.add.at(acc, (rr[ok], cc[ok]), rgb[ok])
        else:
            np.maximum.at(acc, (rr[ok], cc[ok]), rgb[ok])
    return Image(np.clip(acc, 0, 255).astype(np.uint8))


def rasterize(cloud: FieldCloud, cfg: RenderConfig) -> Image:
    """Long-exposure composite of every sample, projected orthographically."""
    return _rasterize_values(cloud.positions, cloud.values, _norm_scale(cloud.values, cfg), cfg)


def composite(images, exposure: Exposure = Exposure.ADDITIVE) -> Image:
    """Merge exposures of the same frame: saturating sum or per-channel maximum."""
    images = list(images)
    if not images:
        raise EmptyFrame("nothing to composite")
    exposure = Exposure(exposure)
    stack = np.stack([im.pixels.astype(np.int64) for im in images])
    merged = stack.sum(axis=0) if exposure is Exposure.ADDITIVE else stack.max(axis=0)
    return Image(np.clip(merged, 0, 255).astype(np.uint8))


def unit_rotor(angle: float) -> complex:
    """``exp(i angle)``, exactly 1 when ``angle`` is a whole number of turns."""
    turns = angle / (2 * math.pi)
    if abs(turns - round(turns)) < 1e-12:
        return 1 + 0j
    return complex(math.cos(angle), math.sin(angle))


def render_frame(cloud: FieldCloud, cfg: RenderConfig, index: int, delta_phase: float) -> Image:
    rotated = cloud.values * unit_rotor(index * delta_phase)
    # rotation preserves magnitude, so the scale is taken from the original cloud
    return _rasterize_values(cloud.positions, rotated, _norm_scale(cloud.values, cfg), cfg)


def animate(cloud: FieldCloud, cfg: RenderConfig, frames: int, delta_phase: float) -> list[Image]:
    """Frames ``0 .. frames-1``; frame ``j`` shows the cloud rotated by ``j * delta_phase``."""
    if frames < 1:
        raise InvalidParameter(f"frames must be >= 1, got {frames}")
    return [render_frame(cloud, cfg, j, delta_phase) for j in range(frames)]


def write_frames(images, out_dir: str | os.PathLike) -> list[Path]:
    out = Path(out_dir)
    paths = []
    for j, img in enumerate(images):
        p = out / f"frame_{j:04d}.ppm"
        img.save(p)
        paths.append(p)
    return paths


def cloud_is_linear(cloud: FieldCloud) -> bool:
    # swimcloud files keep 9 significant digits, so allow that much rounding
    scale = float(np.max(np.abs(cloud.positions))) if len(cloud) else 0.0
    return is_collinear(cloud.positions, 1e-9 + 1e-8 * scale)


def swim_dotgraph(
    cloud: FieldCloud, height: int, component: str = "re", color=(255, 255, 255)
) -> Image:
    """One column per sample, one lit pixel whose height tracks Re or Im.

    The largest absolute value of the component maps to the top (positive)
    or bottom (negative) row; zero sits in the middle row.
    """
    if len(cloud) >= 2 and not cloud_is_linear(cloud):
        raise PathKindMismatch("dot-graph needs a cloud taken along a linear path")
    if height < 1:
        raise InvalidParameter("height must be >= 1")
    vals = component_of(cloud.values, component)
    peak = float(np.max(np.abs(vals)))
    level = vals / peak if peak > 0 else np.zeros_like(vals)
    rows = np.floor((1.0 - level) / 2.0 * (height - 1) + 0.5).astype(int)
    px = np.zeros((height, len(vals), 3), dtype=np.uint8)
    px[rows, np.arange(len(vals))] = color
    return Image(px)


def component_of(values, component: str) -> np.ndarray:
    c = component.lower()
    if c == "re":
        return np.real(values)
    if c == "im":
        return np.imag(values)
    raise InvalidParameter(f"component must be 're' or 'im', got {component!r}")
