"""Fringe spacing of two in-phase sources against the small-angle law.

For each separation d the scan line sits at distance L and spans a fixed
number of predicted fringe periods; the table shows how the measured
spacing tracks lambda*L/d, where the near-field flag switches on, and how
the law drifts once the scan reaches wide angles (small d, many periods).
"""

import argparse

from swimlab.analysis import fringe_spacing
from swimlab.scan import acquire_ideal, linear_path
from swimlab.wavecore import Medium, Scene, Source


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frequency", type=float, default=5000.0)
    ap.add_argument("--speed", type=float, default=350.0)
    ap.add_argument("--distance", type=float, default=5.0, help="L, metres")
    ap.add_argument("--separations", type=float, nargs="+", default=[0.25, 0.5, 1.0, 2.0])
    ap.add_argument("--periods", type=float, default=3.0, help="half-span in predicted periods")
    ap.add_argument("--points", type=int, default=401)
    args = ap.parse_args()

    f, L = args.frequency, args.distance
    print(f"{'d (m)':>6} {'measured':>9} {'lambda L/d':>10} {'error':>8} {'peaks':>5} near_field")
    for d in args.separations:
        scene = Scene([Source((-d / 2, 0, 0), f), Source((d / 2, 0, 0), f)], Medium(args.speed))
        half = args.periods * scene.wavelength * L / d
        cloud = acquire_ideal(scene, linear_path((-half, L, 0), (half, L, 0), args.points, 1.0))
        fm = fringe_spacing(cloud, scene)
        err = (fm.spacing - fm.predicted) / fm.predicted
        print(f"{d:6.2f} {fm.spacing:9.4f} {fm.predicted:10.4f} {err:+8.2%} {len(fm.peaks):5d} {fm.near_field}")


if __name__ == "__main__":
    main()
