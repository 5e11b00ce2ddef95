"""Measure the speed of sound from a lock-in scan of a single tone.

Sweeps the scan noise level and reports the extracted wavelength, the
derived speed, and its error against the dry-air value at the given
temperature. Optionally saves the phase image and the dot-graph as PNG.
"""

import argparse
from pathlib import Path

from swimlab import analysis
from swimlab.lockin import LockInConfig, default_dwell
from swimlab.render import RenderConfig, grid_extent, rasterize, swim_dotgraph
from swimlab.scan import acquire_lockin, linear_path
from swimlab.wavecore import Medium, Scene, Source


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frequency", type=float, default=5000.0)
    ap.add_argument("--speed", type=float, default=347.0, help="true medium speed, m/s")
    ap.add_argument("--temperature", type=float, default=27.0, help="deg C for the theory value")
    ap.add_argument("--length", type=float, default=1.5)
    ap.add_argument("--points", type=int, default=601)
    ap.add_argument("--tau", type=float, default=5e-3)
    ap.add_argument("--noise", type=float, nargs="+", default=[0.0, 0.1, 0.5, 1.0])
    ap.add_argument("--seed", type=int, default=1974)
    ap.add_argument("--out", type=Path, help="directory for PNG output")
    args = ap.parse_args()

    theory = analysis.theoretical_sound_speed(args.temperature)
    cfg = LockInConfig(args.frequency, max(200e3, 40 * args.frequency), args.tau)
    path = linear_path((0, 0, 0), (args.length, 0, 0), args.points, default_dwell(cfg))
    print(f"theory at {args.temperature} C: {theory:.3f} m/s")
    print(f"{'noise':>6} {'lambda (m)':>11} {'speed (m/s)':>12} {'err vs theory':>14}")
    for noise in args.noise:
        scene = Scene([Source((-0.5, 0, 0), args.frequency)], Medium(args.speed),
                      noise_rms=noise, seed=args.seed)
        cloud = acquire_lockin(scene, path, cfg)
        wm = analysis.measure_wave(cloud, "re", theory)
        print(f"{noise:6.2f} {wm.wavelength:11.5f} {wm.speed:12.2f} {wm.relative_error_vs_theory:14.3%}")
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            rc = RenderConfig(args.points, 40, grid_extent(0, args.length, args.points, -0.05, 0.05, 1),
                              splat_radius=0)
            rasterize(cloud, rc).save(args.out / f"swim_noise{noise:g}.png")
            swim_dotgraph(cloud, 200).save(args.out / f"dotgraph_noise{noise:g}.png")


if __name__ == "__main__":
    main()
