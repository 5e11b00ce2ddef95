import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swimlab.errors import EmptyScene, InvalidFrequency, MixedFrequency
from swimlab.wavecore import (
    Attenuation,
    Medium,
    Scene,
    Source,
    baseband_field,
    baseband_field_at,
    time_signal_at,
    wavelength,
)


def brute_force_field(sources, speed, attenuation, r_min, point):
    """Term-by-term sum with the standard library, independent of the numpy path."""
    total = 0j
    for pos, amp, phase, freq in sources:
        r = max(math.dist(pos, point), r_min)
        k = 2 * math.pi * freq / speed
        term = amp * cmath.exp(1j * (phase - k * r))
        if attenuation == "inverse_distance":
            term /= r
        total += term
    return total


@pytest.mark.parametrize(
    "freq, speed, expected",
    [(10.525e9, 3.0e8, 0.0285), (5000.0, 350.0, 0.07), (1.0, 1.0, 1.0)],
)
def test_wavelength(freq, speed, expected):
    # radar case is 2.85036 cm; the figure rounds to 2.85 cm
    assert wavelength(freq, Medium(speed)) == pytest.approx(expected, rel=2e-4)


def test_wavelength_rejects_nonpositive_frequency():
    with pytest.raises(InvalidFrequency):
        wavelength(0.0, Medium(343.0))
    with pytest.raises(InvalidFrequency):
        Source((0, 0, 0), -5.0)


def unit_scene(**kw):
    return Scene([Source((0, 0, 0), 1000.0, **kw)], Medium(343.0, Attenuation.NONE))


def test_full_and_half_cycle():
    s = unit_scene()
    lam = s.wavelength
    z = baseband_field_at(s, (lam, 0, 0))
    assert z.real == pytest.approx(1.0, abs=1e-12)
    assert z.imag == pytest.approx(0.0, abs=1e-12)
    z = baseband_field_at(s, (0, lam / 2, 0))
    assert z.real == pytest.approx(-1.0, abs=1e-12)
    assert z.imag == pytest.approx(0.0, abs=1e-12)


def test_equidistant_in_phase_sources_add():
    s = Scene(
        [Source((-0.3, 0, 0), 1000.0), Source((0.3, 0, 0), 1000.0)],
        Medium(343.0, Attenuation.NONE),
    )
    assert abs(baseband_field_at(s, (0, 0.77, 0.1))) == pytest.approx(2.0, abs=1e-12)


def test_triangle_matches_brute_force(triangle_scene):
    point = (0.031, 0.107, 0.013)
    srcs = [(s.position, s.amplitude, s.phase_offset, s.frequency) for s in triangle_scene.sources]
    want = brute_force_field(srcs, 347.0, "inverse_distance", 1e-3, point)
    got = baseband_field_at(triangle_scene, point)
    assert abs(got - want) < 1e-12 * abs(want)


def test_scene_validation():
    with pytest.raises(EmptyScene):
        Scene([], Medium(343.0))
    with pytest.raises(MixedFrequency):
        Scene([Source((0, 0, 0), 1000.0), Source((1, 0, 0), 1001.0)], Medium(343.0))


def test_defaults():
    m = Medium(343.0)
    assert m.attenuation is Attenuation.INVERSE_DISTANCE
    assert m.r_min == 1e-3


def test_clamp_keeps_field_finite_at_source():
    s = Scene([Source((0, 0, 0), 1000.0)], Medium(343.0, r_min=1e-3))
    z = baseband_field_at(s, (0, 0, 0))
    assert abs(z) == pytest.approx(1e3)


def test_time_signal_quarter_period():
    s = unit_scene()
    lam = s.wavelength
    pos = (lam, 0, 0)  # field is (1, 0) here
    assert time_signal_at(s, pos, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert abs(time_signal_at(s, pos, 0.25 / 1000.0)) < 1e-12


def test_time_signal_noise_is_seeded():
    s = Scene([Source((0, 0, 0), 1000.0)], Medium(343.0), noise_rms=0.5, seed=11)
    t = np.arange(64) / 1e5
    a = time_signal_at(s, (1, 0, 0), t, np.random.default_rng(3))
    b = time_signal_at(s, (1, 0, 0), t, np.random.default_rng(3))
    clean = time_signal_at(Scene(s.sources, s.medium), (1, 0, 0), t)
    assert np.array_equal(a, b)
    assert not np.allclose(a, clean)


coord = st.floats(-2.0, 2.0, allow_nan=False)
point = st.tuples(coord, coord, coord)
source = st.builds(
    lambda p, a, ph: Source(p, 2000.0, amplitude=a, phase_offset=ph),
    point,
    st.floats(0.0, 3.0),
    st.floats(-math.pi, math.pi),
)
attenuation = st.sampled_from(list(Attenuation))


@given(st.lists(source, min_size=1, max_size=4), st.lists(source, min_size=1, max_size=4),
       attenuation, st.lists(point, min_size=1, max_size=8))
def test_linearity(s1, s2, att, pts):
    med = Medium(343.0, att)
    both = baseband_field(Scene(s1 + s2, med), pts)
    parts = baseband_field(Scene(s1, med), pts) + baseband_field(Scene(s2, med), pts)
    # round-off is relative to the largest individual term, not the (possibly cancelling) sum
    scale = sum(s.amplitude / 1e-3 for s in s1 + s2) + 1.0
    assert np.max(np.abs(both - parts)) <= 1e-14 * scale


@given(st.floats(1e-3, 5.0), st.floats(-math.pi, math.pi))
def test_phase_distance_law(r, phase):
    s = unit_scene(phase_offset=phase)
    z = baseband_field_at(s, (0, 0, r))
    want = (phase - 2 * math.pi * r / s.wavelength) % (2 * math.pi)
    got = cmath.phase(z) % (2 * math.pi)
    diff = abs((got - want + math.pi) % (2 * math.pi) - math.pi)
    assert diff < 1e-9


@given(st.lists(point, min_size=1, max_size=8), st.floats(1e-4, 1e-2))
def test_clamp_inactive_beyond_r_min(pts, r_min):
    src = [Source((0.0, 0.0, 0.0), 1500.0)]
    pts = [p for p in pts if math.dist(p, (0, 0, 0)) >= 1e-2]
    if not pts:
        return
    a = baseband_field(Scene(src, Medium(343.0, r_min=r_min)), pts)
    b = baseband_field(Scene(src, Medium(343.0, r_min=1e-6)), pts)
    assert np.array_equal(a, b)


@given(st.floats(0.05, 1.0), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0),
       st.sampled_from([500.0, 2000.0, 40e3]))
def test_antiphase_null_on_bisector(half_sep, y, z, freq):
    s = Scene(
        [Source((-half_sep, 0, 0), freq), Source((half_sep, 0, 0), freq, phase_offset=math.pi)],
        Medium(343.0, Attenuation.NONE),
    )
    assert abs(baseband_field_at(s, (0.0, y, z))) < 1e-9
