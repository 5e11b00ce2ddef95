"""Lock-in output noise against the filter time constant.

Mixing doubles white noise of rms sigma to variance 2*sigma**2 per
quadrature, and a single-pole filter with coefficient alpha passes
alpha/(2 - alpha) of it, which is about sigma/sqrt(tau*fs) in rms.
"""

import argparse
import math

import numpy as np

from swimlab.lockin import LockInConfig, default_dwell
from swimlab.scan import acquire_ideal, acquire_lockin, linear_path
from swimlab.wavecore import Attenuation, Medium, Scene, Source


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--fs", type=float, default=100e3)
    ap.add_argument("--taus", type=float, nargs="+", default=[1e-3, 2e-3, 5e-3, 10e-3, 20e-3])
    ap.add_argument("--poses", type=int, default=200)
    ap.add_argument("--seed", type=int, default=5)
    args = ap.parse_args()

    scene = Scene([Source((0, 0, 0), 5000.0)], Medium(350.0, Attenuation.NONE),
                  noise_rms=args.sigma, seed=args.seed)
    print(f"{'tau (ms)':>8} {'measured rms':>12} {'predicted':>10}")
    for tau in args.taus:
        cfg = LockInConfig(5000.0, args.fs, tau)
        path = linear_path((0.1, 0, 0), (0.9, 0, 0), args.poses, default_dwell(cfg))
        err = acquire_lockin(scene, path, cfg).values - acquire_ideal(scene, path).values
        rms = float(np.sqrt(np.mean(err.real**2 + err.imag**2) / 2))
        pred = args.sigma * math.sqrt(2 * cfg.alpha / (2 - cfg.alpha))
        print(f"{tau * 1e3:8.1f} {rms:12.5f} {pred:10.5f}")


if __name__ == "__main__":
    main()
