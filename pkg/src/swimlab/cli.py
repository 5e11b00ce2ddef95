"""``swimlab`` command line front end.

    swimlab <simulate|render|animate|analyze|sightfield> --config FILE --out DIR
    swimlab recipe <name> --out DIR

Every run writes ``config.normalized.json`` and ``report.txt`` to the output
directory and prints the report. Failures print one ``error ...`` line to
stderr and exit with the code of the failing stage (2 config, 3 acquisition,
4 render, 5 analysis).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import resources
from pathlib import Path

from . import analysis, render
from .config import AnalysisSpec, RunConfig, dump_config, parse_config, parse_config_dict, with_seed
from .errors import InvalidValue, MissingField, SwimError
from .scan import FieldCloud, acquire_ideal, acquire_lockin, write_cloud
from .sightfield import sweep_sightfield

COMMANDS = ("simulate", "render", "animate", "analyze", "sightfield")
RECIPES = ("fig5-radar", "fig7-swim", "fig8-darkroom", "fig11-fringes", "fig4-sightfield")


def _acquire(cfg: RunConfig, path_spec=None, workers: int = 1) -> FieldCloud:
    if cfg.scene is None:
        raise MissingField("sources")
    path = (path_spec or cfg.path).build()
    if cfg.lockin is None:
        return acquire_ideal(cfg.scene, path)
    return acquire_lockin(cfg.scene, path, cfg.lockin, workers=workers)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def format_report(report: dict) -> str:
    return "".join(f"{k}={_fmt(v)}\n" for k, v in report.items())


def _render_cloud(cloud: FieldCloud, cfg: RunConfig, out: Path, report: dict) -> None:
    rcfg = cfg.render
    if rcfg is None:
        raise MissingField("render")
    img = render.rasterize(cloud, rcfg)
    img.save(out / "image.ppm")
    report["image"] = "image.ppm"


def _analyze(cloud: FieldCloud, cfg: RunConfig, out: Path, report: dict, workers: int) -> None:
    spec = cfg.analysis or AnalysisSpec()
    if spec.fringes:
        line_cloud = cloud if spec.fringe_line is None else _acquire(cfg, spec.fringe_line, workers)
        if spec.fringe_line is not None:
            write_cloud(line_cloud, out / "fringe_line.swimcloud")
        fm = analysis.fringe_spacing(line_cloud, cfg.scene)
        report["fringe_spacing"] = fm.spacing
        report["fringe_peaks"] = len(fm.peaks)
        report["fringe_predicted"] = fm.predicted
        report["near_field"] = fm.near_field
        report["fringe_relative_error"] = abs(fm.spacing - fm.predicted) / fm.predicted
    else:
        theory = (
            analysis.theoretical_sound_speed(spec.temperature)
            if spec.temperature is not None
            else cfg.scene.medium.speed
        )
        wm = analysis.measure_wave(cloud, spec.component, theory)
        report["wavelength"] = wm.wavelength
        report["cycles"] = wm.cycle_count
        report["speed"] = wm.speed
        report["theory"] = theory
        report["relative_error"] = wm.relative_error_vs_theory


def execute(commands, cfg: RunConfig, out_dir, workers: int = 1,
            frames: int | None = None) -> dict:
    """Acquire once, run each pipeline in ``commands``, write artifacts and the report."""
    if isinstance(commands, str):
        commands = [commands]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.normalized.json").write_text(dump_config(cfg), encoding="utf-8")
    report: dict = {"command": "+".join(commands)}

    if "sightfield" in commands:
        if cfg.camera is None:
            raise MissingField("camera")
        cloud = sweep_sightfield(cfg.camera, cfg.path.build(), cfg.feedback, cfg.seed)
    else:
        cloud = _acquire(cfg, workers=workers)
    write_cloud(cloud, out / "cloud.swimcloud")
    report["samples"] = len(cloud)
    report["acquisition"] = cloud.acquisition.value
    if cfg.scene is not None:
        report["frequency"] = cfg.scene.frequency
        report["medium_speed"] = cfg.scene.medium.speed
        report["model_wavelength"] = cfg.scene.wavelength

    for command in commands:
        if command in ("render", "sightfield"):
            _render_cloud(cloud, cfg, out, report)
            if cfg.dotgraph is not None:
                img = render.swim_dotgraph(cloud, cfg.dotgraph.height, cfg.dotgraph.component)
                img.save(out / "dotgraph.ppm")
                report["dotgraph"] = "dotgraph.ppm"
        elif command == "animate":
            if cfg.render is None:
                raise MissingField("render")
            anim = cfg.animation
            n = frames if frames is not None else (anim.frames if anim else 24)
            delta = anim.delta_phase if anim and frames is None else 2 * math.pi / n
            fdir = out / "frames"
            fdir.mkdir(exist_ok=True)
            render.write_frames(render.animate(cloud, cfg.render, n, delta), fdir)
            report["frames"] = n
            report["delta_phase"] = delta
        elif command == "analyze":
            _analyze(cloud, cfg, out, report, workers)
        elif command != "simulate":
            raise InvalidValue("command", f"unknown command {command!r}")

    (out / "report.txt").write_text(format_report(report), encoding="utf-8")
    return report


def load_recipe(name: str) -> dict:
    if name not in RECIPES:
        raise InvalidValue("recipe", f"unknown recipe {name!r}; choose from {', '.join(RECIPES)}")
    text = resources.files("swimlab.recipes").joinpath(f"{name}.json").read_text("utf-8")
    return json.loads(text)


def run_recipe(name: str, out_dir, workers: int = 1, seed: int | None = None) -> dict:
    """Run every step of a bundled recipe into ``out_dir/<step>/``."""
    recipe = load_recipe(name)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary: dict = {"recipe": name}
    spacings = []
    for step in recipe["steps"]:
        cfg = parse_config_dict(step["config"])
        if seed is not None:
            cfg = with_seed(cfg, seed)
        rep = execute(step["commands"], cfg, out / step["name"], workers)
        for k, v in rep.items():
            if k != "command":
                summary[f"{step['name']}.{k}"] = v
        if "fringe_spacing" in rep:
            spacings.append(rep["fringe_spacing"])
    if len(spacings) == 2:
        summary["fringe_ratio"] = spacings[0] / spacings[1]
    (out / "report.txt").write_text(format_report(summary), encoding="utf-8")
    return summary


def _error_line(exc: SwimError) -> str:
    field = getattr(exc, "field", None)
    parts = [f"error kind={type(exc).__name__}", f"exit={exc.exit_code}"]
    if field:
        parts.append(f"field={field}")
    parts.append(f"message={json.dumps(str(exc))}")
    return " ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swimlab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS + ("recipe",))
    p.add_argument("name", nargs="?", help="recipe name (recipe command only)")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--frames", type=int, help="override animation frame count")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--workers", type=int, default=1, help="threads for pose acquisition")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "recipe":
            if not args.name:
                raise MissingField("recipe")
            report = run_recipe(args.name, args.out, args.workers, args.seed)
        else:
            if args.name:
                raise InvalidValue("name", "only the recipe command takes a name")
            if not args.config:
                raise MissingField("--config")
            try:
                text = Path(args.config).read_text(encoding="utf-8")
            except OSError as exc:
                raise InvalidValue("--config", str(exc)) from exc
            cfg = parse_config(text)
            if args.seed is not None:
                if not 0 <= args.seed < 2**64:
                    raise InvalidValue("--seed", "must fit in an unsigned 64-bit integer")
                cfg = with_seed(cfg, args.seed)
            report = execute(args.command, cfg, args.out, args.workers, args.frames)
    except SwimError as exc:
        print(_error_line(exc), file=sys.stderr)
        return exc.exit_code
    sys.stdout.write(format_report(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
