"""When the pair condition fails the minimum can sit between candidate tilts.

A thin, nearly edge-on object passes close to the line of sight. Two of its
sides come nearer to the lens center than the focal length, and the f-number
then has a smooth minimum where only two vertices touch the wedge. The
optimizer detects the failed condition and searches each smooth piece.
"""

import numpy as np

from sharpfield import DofParams, grid_oracle, optimize_tilt_2d
from sharpfield.optimize import feasible_theta_interval

params = DofParams(0.05, 3e-5)
for h in (0.01, 0.005):
    pts = np.array([[0, 0, 1], [0, h, 1.5], [0, -h, 2]])
    rep = optimize_tilt_2d(pts, params)
    print(f"h = {h}")
    for d in rep.condition_diagnostics:
        print(f"  pair {d.pair[0] + 1}{d.pair[1] + 1}: distance {d.ratio:.4f} m, above f: {d.satisfied}")
    b = rep.best
    print(f"  best {b.label}: theta={b.theta:.7f}, n={b.fnumber:.6f}; untilted n={rep.zero_tilt_value:.6f}")
    o = grid_oracle(pts, params, feasible_theta_interval(pts, params.f), steps=20001)
    print(f"  brute-force grid: theta={o.theta:.7f}, n={o.n:.6f}")
