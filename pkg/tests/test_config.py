import copy
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from swimlab.config import dump_config, parse_config, parse_config_dict, with_seed
from swimlab.errors import InvalidValue, MissingField, UnknownField
from swimlab.lockin import default_dwell
from swimlab.wavecore import Attenuation

MINIMAL = {
    "schema": 1,
    "sources": [{"position": [0, 0, 0], "frequency": 5000}],
    "medium": {"speed": 347},
    "path": {"kind": "linear", "start": [0.1, 0, 0], "end": [1.6, 0, 0], "n": 601},
}


def cfg_with(**changes):
    d = copy.deepcopy(MINIMAL)
    d.update(changes)
    return d


def test_minimal_defaults():
    cfg = parse_config(json.dumps(MINIMAL))
    assert cfg.seed == 0
    src = cfg.scene.sources[0]
    assert (src.amplitude, src.phase_offset) == (1.0, 0.0)
    assert cfg.scene.medium.attenuation is Attenuation.INVERSE_DISTANCE
    assert cfg.scene.medium.r_min == 1e-3
    assert cfg.scene.noise_rms == 0.0
    assert cfg.lockin is None and cfg.render is None
    assert cfg.path.dwell == 1.0


def test_lockin_defaults_fill_reference_and_dwell():
    cfg = parse_config_dict(cfg_with(lockin={}))
    assert cfg.lockin.reference_frequency == 5000.0
    assert cfg.lockin.sample_rate == 200e3
    assert cfg.lockin.time_constant == 5e-3
    assert cfg.lockin.settle_factor == 5.0
    assert cfg.path.dwell == default_dwell(cfg.lockin)


def test_normalized_dump_echoes_defaults():
    dumped = json.loads(dump_config(parse_config_dict(cfg_with(lockin={}, render={}))))
    assert dumped["medium"] == {"speed": 347.0, "attenuation": "inverse_distance", "r_min": 0.001}
    assert dumped["render"]["normalization"] == "global_max"
    assert dumped["render"]["splat_radius"] == 1
    assert len(dumped["render"]["extent"]) == 4


def test_missing_medium_speed():
    d = cfg_with(medium={"attenuation": "none"})
    with pytest.raises(MissingField) as exc:
        parse_config_dict(d)
    assert exc.value.field == "medium.speed"


def test_missing_schema_and_path():
    d = copy.deepcopy(MINIMAL)
    del d["schema"]
    with pytest.raises(MissingField, match="schema"):
        parse_config_dict(d)
    d = copy.deepcopy(MINIMAL)
    del d["path"]
    with pytest.raises(MissingField, match="path"):
        parse_config_dict(d)


def test_unknown_field():
    d = cfg_with(path={**MINIMAL["path"], "speed": 3})
    with pytest.raises(UnknownField) as exc:
        parse_config_dict(d)
    assert exc.value.field == "path.speed"
    with pytest.raises(UnknownField):
        parse_config_dict(cfg_with(colour="red"))


def test_sample_rate_ten_times_rule():
    with pytest.raises(InvalidValue) as exc:
        parse_config_dict(cfg_with(lockin={"sample_rate": 8 * 5000}))
    assert exc.value.field == "lockin.sample_rate"
    assert "10x" in str(exc.value)


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"medium": {"speed": -1}}, "medium.speed"),
        ({"noise_rms": -0.1}, "noise_rms"),
        ({"sources": []}, "sources"),
        ({"schema": 2}, "schema"),
        ({"lockin": {"reference_frequency": 4000}}, "lockin.reference_frequency"),
        ({"path": {"kind": "spiral"}}, "path.kind"),
        ({"path": {"kind": "linear", "start": [0, 0, 0], "end": [0, 0, 0], "n": 3}}, "path"),
        ({"render": {"normalization": {"fixed": 0}}}, "render.normalization.fixed"),
        ({"render": {"extent": [1, 0, 0, 1]}}, "render"),
    ],
)
def test_invalid_values_name_the_field(changes, field):
    with pytest.raises(InvalidValue) as exc:
        parse_config_dict(cfg_with(**changes))
    assert exc.value.field == field


def test_mixed_frequencies_rejected():
    d = cfg_with(sources=[{"position": [0, 0, 0], "frequency": 5000},
                          {"position": [1, 0, 0], "frequency": 6000}])
    with pytest.raises(InvalidValue):
        parse_config_dict(d)


def test_sightfield_only_config():
    d = {"schema": 1, "camera": {"position": [0, 0, 0]},
         "path": {"kind": "raster", "min_corner": [-1, -1, 2], "max_corner": [1, 1, 2],
                  "counts": [5, 5, 1]}}
    cfg = parse_config_dict(d)
    assert cfg.scene is None
    assert cfg.camera.hfov == 40.0 and cfg.feedback.loop_gain == 1.5


@pytest.mark.parametrize(
    "start, end",
    [([0, 0, 0], [0, 0, 1.0]), ([5, 0, 0], [5, 5e-300, 0]), ([0, 0, 0], [1e-300, 0, 0])],
)
def test_default_extent_never_degenerate(start, end):
    d = cfg_with(path={"kind": "linear", "start": start, "end": end, "n": 2}, render={})
    u0, u1, v0, v1 = parse_config_dict(d).render.extent
    assert u1 > u0 and v1 > v0


def test_with_seed_propagates_to_scene():
    cfg = with_seed(parse_config_dict(MINIMAL), 123)
    assert cfg.seed == cfg.scene.seed == 123


vec = st.lists(st.floats(-5, 5, allow_nan=False), min_size=3, max_size=3)
source = st.fixed_dictionaries(
    {"position": vec, "frequency": st.just(2000.0)},
    optional={"amplitude": st.floats(0, 10), "phase_offset": st.floats(-math.pi, math.pi)},
)


@st.composite
def configs(draw):
    d = {
        "schema": 1,
        "seed": draw(st.integers(0, 2**64 - 1)),
        "sources": draw(st.lists(source, min_size=1, max_size=3)),
        "medium": draw(st.fixed_dictionaries(
            {"speed": st.floats(1, 5000)},
            optional={"attenuation": st.sampled_from(["none", "inverse_distance"]),
                      "r_min": st.floats(1e-6, 1e-1)})),
        "noise_rms": draw(st.floats(0, 2)),
    }
    if draw(st.booleans()):
        d["path"] = {"kind": "linear", "start": [0, 0, 0], "end": draw(vec.filter(lambda v: any(v))),
                     "n": draw(st.integers(2, 50))}
    else:
        d["path"] = {"kind": "raster", "min_corner": [-1, -1, 0], "max_corner": [1, 1, 0],
                     "counts": [draw(st.integers(2, 9)), draw(st.integers(1, 9)), 1]}
    if draw(st.booleans()):
        d["lockin"] = draw(st.fixed_dictionaries(
            {}, optional={"time_constant": st.floats(1e-3, 0.05),
                          "settle_factor": st.floats(5, 20)}))
    if draw(st.booleans()):
        d["render"] = draw(st.fixed_dictionaries(
            {}, optional={"width": st.integers(1, 300), "exposure": st.sampled_from(["additive", "max"]),
                          "normalization": st.one_of(st.just("global_max"),
                                                     st.builds(lambda v: {"fixed": v}, st.floats(0.1, 9)))}))
    if draw(st.booleans()):
        d["analysis"] = {"component": draw(st.sampled_from(["re", "im"])),
                         "temperature": draw(st.none() | st.floats(-50, 50))}
    if draw(st.booleans()):
        d["animation"] = {"frames": draw(st.integers(1, 60))}
    return d


@given(configs())
def test_normalized_round_trip(d):
    text = json.dumps(d)
    first = parse_config(text)
    assert parse_config(dump_config(first)) == first
    assert dump_config(parse_config(dump_config(first))) == dump_config(first)
