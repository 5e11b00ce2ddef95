import json
import re
import subprocess
import sys

import pytest

from swimlab.cli import format_report, main
from swimlab.render import read_ppm
from swimlab.scan import read_cloud

SWIM = {
    "schema": 1,
    "seed": 7,
    "sources": [{"position": [-0.5, 0, 0], "frequency": 5000}],
    "medium": {"speed": 347},
    "noise_rms": 0.05,
    "lockin": {},
    "path": {"kind": "linear", "start": [0, 0, 0], "end": [0.3, 0, 0], "n": 121},
    "render": {"width": 121, "height": 9},
    "analysis": {"component": "re", "temperature": 27},
    "animation": {"frames": 6},
}


def run(tmp_path, cfg, *args, name="run"):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / name
    return main([*args, "--config", str(path), "--out", str(out)]), out


def read_report(out):
    return dict(line.split("=", 1) for line in (out / "report.txt").read_text().splitlines())


def test_simulate_writes_cloud_and_normalized_config(tmp_path, capsys):
    code, out = run(tmp_path, SWIM, "simulate")
    assert code == 0
    cloud = read_cloud(out / "cloud.swimcloud")
    assert len(cloud) == 121 and cloud.acquisition.value == "LockIn" and cloud.seed == 7
    norm = json.loads((out / "config.normalized.json").read_text())
    assert norm["lockin"]["sample_rate"] == 200000.0
    rep = read_report(out)
    assert rep["samples"] == "121"
    assert capsys.readouterr().out == (out / "report.txt").read_text()


def test_analyze_report_keys(tmp_path):
    code, out = run(tmp_path, SWIM, "analyze")
    assert code == 0
    rep = read_report(out)
    assert {"wavelength", "cycles", "speed", "theory", "relative_error"} <= rep.keys()
    assert float(rep["wavelength"]) == pytest.approx(347 / 5000, rel=0.01)
    assert float(rep["theory"]) == pytest.approx(347.3, abs=0.1)


def test_render_writes_ppm(tmp_path):
    code, out = run(tmp_path, SWIM, "render")
    assert code == 0
    img = read_ppm(out / "image.ppm")
    assert (img.width, img.height) == (121, 9)
    assert img.pixels.any()


def test_animate_frames_and_override(tmp_path):
    code, out = run(tmp_path, SWIM, "animate")
    assert code == 0
    assert len(list((out / "frames").glob("frame_*.ppm"))) == 6
    code, out = run(tmp_path, SWIM, "animate", "--frames", "3", name="three")
    assert code == 0
    assert sorted(p.name for p in (out / "frames").iterdir()) == [
        "frame_0000.ppm", "frame_0001.ppm", "frame_0002.ppm"]


def test_seed_override_changes_noise(tmp_path):
    _, a = run(tmp_path, SWIM, "simulate", name="a")
    _, b = run(tmp_path, SWIM, "simulate", "--seed", "7", name="b")
    _, c = run(tmp_path, SWIM, "simulate", "--seed", "8", name="c")
    ca, cb, cc = ((p / "cloud.swimcloud").read_bytes() for p in (a, b, c))
    assert ca == cb != cc


def test_workers_do_not_change_output(tmp_path):
    _, a = run(tmp_path, SWIM, "simulate", name="a")
    _, b = run(tmp_path, SWIM, "simulate", "--workers", "4", name="b")
    assert (a / "cloud.swimcloud").read_bytes() == (b / "cloud.swimcloud").read_bytes()


def test_sightfield_command(tmp_path):
    cfg = {"schema": 1, "camera": {"position": [0, 0, 0]},
           "path": {"kind": "raster", "min_corner": [-2, 0, 0], "max_corner": [2, 0, 4],
                    "counts": [41, 1, 41]},
           "render": {"plane": "xz"}}
    code, out = run(tmp_path, cfg, "sightfield")
    assert code == 0
    img = read_ppm(out / "image.ppm")
    assert img.pixels.any() and not img.pixels.all()


ERROR_LINE = re.compile(r'^error kind=(\w+) exit=(\d) (field=\S+ )?message=".*"$')


@pytest.mark.parametrize(
    "mutate, command, kind, code",
    [
        (lambda d: d["medium"].pop("speed"), "simulate", "MissingField", 2),
        (lambda d: d.update(bogus=1), "simulate", "UnknownField", 2),
        (lambda d: d["lockin"].update(sample_rate=40000), "simulate", "InvalidValue", 2),
        (lambda d: d["path"].update(dwell=1e-4), "simulate", "NotSettled", 3),
        (lambda d: d["render"].update(extent=[5, 6, 5, 6]), "render", "EmptyFrame", 4),
        (lambda d: d["path"].update(end=[0.01, 0, 0], n=5), "analyze", "NoOscillation", 5),
    ],
)
def test_error_exit_codes(tmp_path, capsys, mutate, command, kind, code):
    cfg = json.loads(json.dumps(SWIM))
    mutate(cfg)
    got, _ = run(tmp_path, cfg, command)
    err = capsys.readouterr().err.strip()
    assert got == code
    m = ERROR_LINE.match(err)
    assert m, err
    assert m.group(1) == kind and int(m.group(2)) == code


def test_missing_config_field_reported(tmp_path, capsys):
    cfg = json.loads(json.dumps(SWIM))
    cfg["medium"].pop("speed")
    run(tmp_path, cfg, "simulate")
    assert "field=medium.speed" in capsys.readouterr().err


def test_malformed_json_is_config_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["simulate", "--config", str(p), "--out", str(tmp_path / "o")]) == 2


def test_unknown_recipe(tmp_path):
    assert main(["recipe", "nope", "--out", str(tmp_path)]) == 2


def test_recipe_fig5(tmp_path):
    assert main(["recipe", "fig5-radar", "--out", str(tmp_path)]) == 0
    rep = read_report(tmp_path)
    key = next(k for k in rep if k.endswith(".wavelength"))
    assert float(rep[key]) == pytest.approx(0.0285, rel=0.01)


def test_format_report():
    assert format_report({"a": True, "b": 0.5, "c": 3}) == "a=true\nb=0.5\nc=3\n"


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "swimlab.cli", "--help"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "recipe" in res.stdout
