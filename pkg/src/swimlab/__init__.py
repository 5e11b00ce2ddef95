"""Phase-coherent wave-field imaging: sources, lock-in scans, phase-coloured renders."""

from .analysis import (
    extract_wavelength,
    fringe_spacing,
    measure_wave,
    propagation_speed,
    theoretical_sound_speed,
)
from .lockin import LockInConfig, default_dwell, demodulate, settle_samples
from .render import RenderConfig, animate, phasor_to_rgb, rasterize, swim_dotgraph
from .scan import FieldCloud, acquire_ideal, acquire_lockin, linear_path, raster_path
from .sightfield import CameraModel, FeedbackConfig, camera_sees, loop_fixed_point, sweep_sightfield
from .wavecore import Attenuation, Medium, Scene, Source, baseband_field_at, time_signal_at, wavelength

__version__ = "0.1.0"
