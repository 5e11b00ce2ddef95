import os

import hypothesis
import numpy as np
import pytest

from swimlab.wavecore import Attenuation, Medium, Scene, Source

hypothesis.settings.register_profile("default", deadline=None, max_examples=100)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, name, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number} {name}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def triangle_scene():
    """Three 40 kHz transducers on an equilateral triangle of side 5 cm."""
    side = 0.05
    h = side * np.sqrt(3) / 2
    pts = [(-side / 2, 0.0, 0.0), (side / 2, 0.0, 0.0), (0.0, h, 0.0)]
    return Scene(
        [Source(p, 40e3, amplitude=a, phase_offset=ph) for p, a, ph in zip(pts, (1.0, 0.8, 1.2), (0.0, 0.4, -1.1))],
        Medium(347.0, Attenuation.INVERSE_DISTANCE),
    )
