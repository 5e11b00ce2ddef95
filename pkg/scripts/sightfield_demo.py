"""Paint a camera's sightfield by sweeping a feedback bulb through space.

Writes a top view (xz) and a front view (xy) for one sub-critical and one
super-critical loop gain, so the threshold behaviour is visible side by side.
"""

import argparse
from pathlib import Path

import numpy as np

from swimlab.render import RenderConfig, grid_extent, rasterize
from swimlab.scan import raster_path
from swimlab.sightfield import CameraModel, FeedbackConfig, sweep_sightfield


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("sightfield_out"))
    ap.add_argument("--n", type=int, default=201, help="grid nodes per side")
    ap.add_argument("--gains", type=float, nargs="+", default=[0.8, 1.5])
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    cam = CameraModel((0.0, 0.0, 0.0), hfov=40.0, vfov=30.0, near=0.1, far=10.0)
    n = args.n
    views = {
        "top": (raster_path((-2, 0, 0), (2, 0, 4), (n, 1, n), 1.0), "xz", (-2, 2, 0, 4)),
        "front": (raster_path((-2, -1.5, 3), (2, 1.5, 3), (n, n, 1), 1.0), "xy", (-2, 2, -1.5, 1.5)),
    }
    for gain in args.gains:
        fb = FeedbackConfig(loop_gain=gain)
        for name, (path, plane, (u0, u1, v0, v1)) in views.items():
            cloud = sweep_sightfield(cam, path, fb)
            rc = RenderConfig(n, n, grid_extent(u0, u1, n, v0, v1, n), plane=plane,
                              normalization=1.0, splat_radius=0)
            target = args.out / f"{name}_gain{gain:g}.png"
            rasterize(cloud, rc).save(target)
            peak = float(np.max(np.abs(cloud.values)))
            lit = int(np.count_nonzero(np.abs(cloud.values) > 0.5))
            print(f"{target}: gain={gain} peak brightness={peak:.4f} lit samples={lit}")


if __name__ == "__main__":
    main()
