"""JSON run configuration: parsing, validation, defaulting, normalized dump.

Top-level keys (``schema`` is required and must be 1)::

    schema, seed, sources, medium, noise_rms, path, lockin,
    render, animation, dotgraph, analysis, camera, feedback

``sources`` and ``medium`` may be omitted only for sightfield-only configs
(those carrying a ``camera`` section).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from . import lockin as lk
from .errors import InvalidValue, MissingField, SwimError, UnknownField
from .lockin import LockInConfig
from .render import PLANES, RenderConfig, grid_extent
from .scan import ScanPath, linear_path, raster_path
from .sightfield import CameraModel, FeedbackConfig
from .wavecore import Medium, Scene, Source

SCHEMA_VERSION = 1
_REQUIRED = object()


@dataclass(frozen=True)
class PathSpec:
    kind: str  # "linear" or "raster"
    start: tuple[float, ...] = ()
    end: tuple[float, ...] = ()
    n: int = 0
    min_corner: tuple[float, ...] = ()
    max_corner: tuple[float, ...] = ()
    counts: tuple[int, ...] = ()
    dwell: float = 1.0

    def build(self) -> ScanPath:
        if self.kind == "linear":
            return linear_path(self.start, self.end, self.n, self.dwell)
        return raster_path(self.min_corner, self.max_corner, self.counts, self.dwell)

    def to_dict(self) -> dict:
        if self.kind == "linear":
            return {"kind": "linear", "start": list(self.start), "end": list(self.end),
                    "n": self.n, "dwell": self.dwell}
        return {"kind": "raster", "min_corner": list(self.min_corner),
                "max_corner": list(self.max_corner), "counts": list(self.counts),
                "dwell": self.dwell}


@dataclass(frozen=True)
class AnimationSpec:
    frames: int = 24
    delta_phase: float = 2 * math.pi / 24


@dataclass(frozen=True)
class DotgraphSpec:
    height: int = 200
    component: str = "re"


@dataclass(frozen=True)
class AnalysisSpec:
    component: str = "re"
    temperature: float | None = None
    fringes: bool = False
    fringe_line: PathSpec | None = None


@dataclass(frozen=True)
class RunConfig:
    seed: int
    scene: Scene | None
    path: PathSpec
    lockin: LockInConfig | None = None
    render: RenderConfig | None = None
    animation: AnimationSpec | None = None
    dotgraph: DotgraphSpec | None = None
    analysis: AnalysisSpec | None = None
    camera: CameraModel | None = None
    feedback: FeedbackConfig | None = None


class _Section:
    """Dict view that tracks which keys were read so leftovers can be rejected."""

    def __init__(self, data, prefix: str):
        if not isinstance(data, dict):
            raise InvalidValue(prefix or "<root>", "expected a JSON object")
        self.data = data
        self.prefix = prefix
        self.used: set[str] = set()

    def name(self, key: str) -> str:
        return f"{self.prefix}.{key}" if self.prefix else key

    def has(self, key: str) -> bool:
        return self.data.get(key) is not None

    def get(self, key: str, default=_REQUIRED):
        self.used.add(key)
        if key not in self.data or self.data[key] is None:
            if default is _REQUIRED:
                raise MissingField(self.name(key))
            return default
        return self.data[key]

    def number(self, key, default=_REQUIRED, *, positive=False, nonneg=False) -> float:
        v = self.get(key, default)
        if v is None:
            return v
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise InvalidValue(self.name(key), f"expected a finite number, got {v!r}")
        if positive and not v > 0:
            raise InvalidValue(self.name(key), f"must be > 0, got {v}")
        if nonneg and not v >= 0:
            raise InvalidValue(self.name(key), f"must be >= 0, got {v}")
        return float(v)

    def integer(self, key, default=_REQUIRED, *, minimum=None) -> int:
        v = self.get(key, default)
        if isinstance(v, bool) or not isinstance(v, int):
            raise InvalidValue(self.name(key), f"expected an integer, got {v!r}")
        if minimum is not None and v < minimum:
            raise InvalidValue(self.name(key), f"must be >= {minimum}, got {v}")
        return v

    def vector(self, key, default=_REQUIRED, length=3) -> tuple:
        v = self.get(key, default)
        if (
            not isinstance(v, (list, tuple))
            or len(v) != length
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
            or not all(math.isfinite(c) for c in v)
        ):
            raise InvalidValue(self.name(key), f"expected {length} finite numbers, got {v!r}")
        return tuple(float(c) for c in v)

    def choice(self, key, options, default=_REQUIRED) -> str:
        v = self.get(key, default)
        if v not in options:
            raise InvalidValue(self.name(key), f"must be one of {sorted(options)}, got {v!r}")
        return v

    def section(self, key) -> "_Section | None":
        self.used.add(key)
        if self.data.get(key) is None:
            return None
        return _Section(self.data[key], self.name(key))

    def finish(self):
        for key in self.data:
            if key not in self.used:
                raise UnknownField(self.name(key))


def _wrap(name: str, fn, *args, **kwargs):
    """Run a constructor, re-raising domain validation failures as ``InvalidValue``."""
    try:
        return fn(*args, **kwargs)
    except SwimError as exc:
        if isinstance(exc, (MissingField, UnknownField, InvalidValue)):
            raise
        raise InvalidValue(name, str(exc)) from exc


def _parse_sources(root: _Section) -> tuple[Source, ...]:
    raw = root.get("sources")
    if not isinstance(raw, list) or not raw:
        raise InvalidValue("sources", "expected a non-empty list")
    out = []
    for i, item in enumerate(raw):
        sec = _Section(item, f"sources[{i}]")
        src = _wrap(
            sec.prefix,
            Source,
            position=sec.vector("position"),
            frequency=sec.number("frequency", positive=True),
            amplitude=sec.number("amplitude", 1.0, nonneg=True),
            phase_offset=sec.number("phase_offset", 0.0),
        )
        sec.finish()
        out.append(src)
    return tuple(out)


def _parse_medium(sec: _Section) -> Medium:
    m = _wrap(
        "medium",
        Medium,
        speed=sec.number("speed", positive=True),
        attenuation=sec.choice("attenuation", {"none", "inverse_distance"}, "inverse_distance"),
        r_min=sec.number("r_min", 1e-3, positive=True),
    )
    sec.finish()
    return m


def _parse_path(sec: _Section, default_dwell: float) -> PathSpec:
    kind = sec.choice("kind", {"linear", "raster"})
    dwell = sec.number("dwell", default_dwell, positive=True)
    if kind == "linear":
        spec = PathSpec(
            "linear",
            start=sec.vector("start"),
            end=sec.vector("end"),
            n=sec.integer("n", minimum=2),
            dwell=dwell,
        )
    else:
        counts = sec.vector("counts")
        if not all(c == int(c) and c >= 1 for c in counts):
            raise InvalidValue(sec.name("counts"), f"expected 3 positive integers, got {counts}")
        spec = PathSpec(
            "raster",
            min_corner=sec.vector("min_corner"),
            max_corner=sec.vector("max_corner"),
            counts=tuple(int(c) for c in counts),
            dwell=dwell,
        )
    sec.finish()
    _wrap(sec.prefix, spec.build)
    return spec


def _parse_lockin(sec: _Section, scene: Scene | None) -> LockInConfig:
    if scene is None:
        raise InvalidValue("lockin", "lock-in acquisition needs sources")
    ref = sec.number("reference_frequency", scene.frequency, positive=True)
    if not math.isclose(ref, scene.frequency, rel_tol=1e-12):
        raise InvalidValue(
            "lockin.reference_frequency",
            f"{ref} Hz does not match the source frequency {scene.frequency} Hz",
        )
    fs = sec.number("sample_rate", 200e3, positive=True)
    if fs < lk.MIN_OVERSAMPLING * ref:
        raise InvalidValue(
            "lockin.sample_rate",
            f"{fs} Hz violates the 10x rule: must be at least 10 x {ref} Hz = {10 * ref} Hz",
        )
    cfg = _wrap(
        "lockin",
        LockInConfig,
        reference_frequency=ref,
        sample_rate=fs,
        time_constant=sec.number("time_constant", 5e-3, positive=True),
        settle_factor=sec.number("settle_factor", 5.0, positive=True),
    )
    sec.finish()
    return cfg


def _default_extent(path: ScanPath, spec: PathSpec, plane: str) -> tuple[float, ...]:
    iu, iv = PLANES[plane]
    pos = path.positions
    lo, hi = pos.min(axis=0), pos.max(axis=0)
    if spec.kind == "raster":
        c = spec.counts
        return grid_extent(lo[iu], hi[iu], c[iu], lo[iv], hi[iv], c[iv])
    span = max(hi[iu] - lo[iu], hi[iv] - lo[iv])
    if span <= 0:
        # the path runs perpendicular to the plane; frame its projected point
        span = float(np.max(hi - lo))
    ext = []
    for a in (iu, iv):
        centre = (lo[a] + hi[a]) / 2
        half = (hi[a] - lo[a]) / 2 + 0.02 * span if hi[a] > lo[a] else span / 2
        half = max(half, 8 * np.spacing(max(abs(lo[a]), abs(hi[a]), 1.0)))
        ext += [centre - half, centre + half]
    return tuple(float(e) for e in ext)


def _parse_render(sec: _Section, path: ScanPath, spec: PathSpec) -> RenderConfig:
    plane = sec.choice("plane", set(PLANES), "xy")
    extent = sec.get("extent", None)
    if extent is None:
        extent = _default_extent(path, spec, plane)
    else:
        extent = sec.vector("extent", length=4)
    norm = sec.get("normalization", "global_max")
    if isinstance(norm, dict):
        nsec = _Section(norm, sec.name("normalization"))
        norm = nsec.number("fixed", positive=True)
        nsec.finish()
    elif norm != "global_max":
        raise InvalidValue(
            sec.name("normalization"), f"expected 'global_max' or {{'fixed': value}}, got {norm!r}"
        )
    cfg = _wrap(
        "render",
        RenderConfig,
        width=sec.integer("width", 400, minimum=1),
        height=sec.integer("height", 400, minimum=1),
        extent=tuple(float(e) for e in extent),
        plane=plane,
        exposure=sec.choice("exposure", {"additive", "max"}, "additive"),
        normalization=norm,
        splat_radius=sec.integer("splat_radius", 1, minimum=0),
    )
    sec.finish()
    return cfg


def parse_config_dict(data) -> RunConfig:
    root = _Section(data, "")
    schema = root.get("schema")
    if schema != SCHEMA_VERSION:
        raise InvalidValue("schema", f"unsupported schema {schema!r}, expected {SCHEMA_VERSION}")
    seed = root.integer("seed", 0, minimum=0)
    if seed >= 2**64:
        raise InvalidValue("seed", "must fit in an unsigned 64-bit integer")

    camera_sec = root.section("camera")
    scene = None
    if camera_sec is None or root.has("sources") or root.has("medium"):
        sources = _parse_sources(root)
        med_sec = root.section("medium")
        if med_sec is None:
            raise MissingField("medium")
        medium = _parse_medium(med_sec)
        noise = root.number("noise_rms", 0.0, nonneg=True)
        scene = _wrap("sources", Scene, sources, medium, noise, seed)
    else:
        root.get("noise_rms", None)

    lockin_sec = root.section("lockin")
    lockin = _parse_lockin(lockin_sec, scene) if lockin_sec is not None else None
    default_dwell = lk.default_dwell(lockin) if lockin is not None else 1.0

    path_sec = root.section("path")
    if path_sec is None:
        raise MissingField("path")
    path_spec = _parse_path(path_sec, default_dwell)
    path = path_spec.build()

    render_sec = root.section("render")
    render = _parse_render(render_sec, path, path_spec) if render_sec is not None else None

    animation = None
    if (a := root.section("animation")) is not None:
        frames = a.integer("frames", 24, minimum=1)
        animation = AnimationSpec(frames, a.number("delta_phase", 2 * math.pi / frames))
        a.finish()

    dotgraph = None
    if (d := root.section("dotgraph")) is not None:
        dotgraph = DotgraphSpec(d.integer("height", 200, minimum=1),
                                d.choice("component", {"re", "im"}, "re"))
        d.finish()

    analysis = None
    if (a := root.section("analysis")) is not None:
        line = None
        if (ls := a.section("fringe_line")) is not None:
            line = _parse_path(ls, default_dwell)
            if line.kind != "linear":
                raise InvalidValue("analysis.fringe_line.kind", "fringe line must be linear")
        temperature = a.number("temperature", None)
        if temperature is not None and not temperature > -273.15:
            raise InvalidValue("analysis.temperature", "below absolute zero")
        fringes = a.get("fringes", False)
        if not isinstance(fringes, bool):
            raise InvalidValue("analysis.fringes", "expected true or false")
        analysis = AnalysisSpec(a.choice("component", {"re", "im"}, "re"), temperature,
                                fringes, line)
        a.finish()

    camera = feedback = None
    if camera_sec is not None:
        c = camera_sec
        camera = _wrap(
            "camera",
            CameraModel,
            position=c.vector("position"),
            forward=c.vector("forward", (0.0, 0.0, 1.0)),
            up=c.vector("up", (0.0, 1.0, 0.0)),
            hfov=c.number("hfov", 40.0),
            vfov=c.number("vfov", 30.0),
            near=c.number("near", 0.1),
            far=c.number("far", 10.0),
        )
        c.finish()
    fb_sec = root.section("feedback")
    if fb_sec is not None or camera is not None:
        f = fb_sec or _Section({}, "feedback")
        feedback = _wrap(
            "feedback",
            FeedbackConfig,
            loop_gain=f.number("loop_gain", 1.5, nonneg=True),
            ambient_seed=f.number("ambient_seed", 0.01, positive=True),
            decay=f.number("decay", 0.5, nonneg=True),
            iterations=f.integer("iterations", 100, minimum=0),
        )
        f.finish()

    root.finish()
    return RunConfig(seed, scene, path_spec, lockin, render, animation, dotgraph, analysis,
                     camera, feedback)


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidValue("<document>", f"invalid JSON: {exc}") from exc
    return parse_config_dict(data)


def config_to_dict(cfg: RunConfig) -> dict:
    """Fully defaulted form; parsing it back yields an equal ``RunConfig``."""
    out: dict = {"schema": SCHEMA_VERSION, "seed": cfg.seed}
    if cfg.scene is not None:
        out["sources"] = [
            {"position": list(s.position), "frequency": s.frequency,
             "amplitude": s.amplitude, "phase_offset": s.phase_offset}
            for s in cfg.scene.sources
        ]
        m = cfg.scene.medium
        out["medium"] = {"speed": m.speed, "attenuation": m.attenuation.value, "r_min": m.r_min}
        out["noise_rms"] = cfg.scene.noise_rms
    out["path"] = cfg.path.to_dict()
    if cfg.lockin is not None:
        c = cfg.lockin
        out["lockin"] = {"reference_frequency": c.reference_frequency,
                         "sample_rate": c.sample_rate, "time_constant": c.time_constant,
                         "settle_factor": c.settle_factor}
    if cfg.render is not None:
        r = cfg.render
        norm = r.normalization if isinstance(r.normalization, str) else {"fixed": r.normalization}
        out["render"] = {"width": r.width, "height": r.height, "plane": r.plane,
                         "extent": list(r.extent), "exposure": r.exposure.value,
                         "normalization": norm, "splat_radius": r.splat_radius}
    if cfg.animation is not None:
        out["animation"] = {"frames": cfg.animation.frames,
                            "delta_phase": cfg.animation.delta_phase}
    if cfg.dotgraph is not None:
        out["dotgraph"] = {"height": cfg.dotgraph.height, "component": cfg.dotgraph.component}
    if cfg.analysis is not None:
        a = cfg.analysis
        out["analysis"] = {"component": a.component, "temperature": a.temperature,
                           "fringes": a.fringes}
        if a.fringe_line is not None:
            out["analysis"]["fringe_line"] = a.fringe_line.to_dict()
    if cfg.camera is not None:
        c = cfg.camera
        out["camera"] = {"position": list(c.position), "forward": list(c.forward),
                         "up": list(c.up), "hfov": c.hfov, "vfov": c.vfov,
                         "near": c.near, "far": c.far}
    if cfg.feedback is not None:
        f = cfg.feedback
        out["feedback"] = {"loop_gain": f.loop_gain, "ambient_seed": f.ambient_seed,
                           "decay": f.decay, "iterations": f.iterations}
    return out


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"


def with_seed(cfg: RunConfig, seed: int) -> RunConfig:
    scene = replace(cfg.scene, seed=seed) if cfg.scene is not None else None
    return replace(cfg, seed=seed, scene=scene)
