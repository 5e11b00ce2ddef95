"""Cycle spacing of a microwave radar tone along a short ideal scan."""

import argparse
import time

from swimlab.analysis import extract_wavelength, propagation_speed
from swimlab.scan import acquire_ideal, linear_path
from swimlab.wavecore import Medium, Scene, Source


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frequency", type=float, default=10.525e9)
    ap.add_argument("--speed", type=float, default=3.0e8)
    ap.add_argument("--length", type=float, default=0.2)
    ap.add_argument("--points", type=int, nargs="+", default=[200, 500, 2000, 20000])
    args = ap.parse_args()

    model = args.speed / args.frequency
    print(f"model wavelength {model * 100:.4f} cm")
    scene = Scene([Source((-1.0, 0, 0), args.frequency)], Medium(args.speed))
    for n in args.points:
        t0 = time.perf_counter()
        cloud = acquire_ideal(scene, linear_path((0, 0, 0), (args.length, 0, 0), n, 1.0))
        lam = extract_wavelength(cloud)
        dt = time.perf_counter() - t0
        print(f"n={n:6d} spacing={lam * 100:.4f} cm  c={propagation_speed(lam, args.frequency):.4e} m/s"
              f"  err={(lam - model) / model:+.3%}  {dt * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
